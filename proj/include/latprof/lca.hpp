#ifndef LATPROF_LCA_HPP
#define LATPROF_LCA_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "latprof/types.hpp"

namespace latprof {

// Latent class analysis: a K-mixture of conditionally independent per-time
// multinomials over states 1..C.
struct LcaModel {
  Eigen::VectorXd priors;                 // K class probabilities
  std::vector<Eigen::MatrixXd> item_probs;  // T matrices, each K x C rows sum 1
  Eigen::MatrixXd posterior;              // N x K responsibilities
  double loglik = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::vector<double> loglik_trace;       // winning restart, per EM iteration

  int num_classes() const { return static_cast<int>(priors.size()); }
  int num_times() const { return static_cast<int>(item_probs.size()); }
};

struct LcaOptions {
  int restarts = 10;
  double tol = 1e-6;
  int max_iter = 1000;
  double smoothing = 1e-6;  // additive smoothing on item probabilities
};

// Stack a cohort into the N x T wide matrix LCA requires. Throws if sequence
// lengths differ: per-time-point mixtures need temporal uniformity.
Eigen::MatrixXi cohort_to_wide(const Cohort& cohort);

// EM fit, best of `restarts` by log-likelihood. Responsibilities are
// initialized from symmetric Dirichlet(1) draws; the E-step runs in log
// space. Deterministic given seed.
LcaModel fit_lca(const Eigen::MatrixXi& X, int K, int C, const LcaOptions& opts,
                 std::uint64_t seed);

// Data log-likelihood of a model on X (exposed for diagnostics and tests).
double lca_loglik(const LcaModel& model, const Eigen::MatrixXi& X);

// MAP class per row, ties toward the lower class index.
std::vector<int> classify_lca(const LcaModel& model);

}  // namespace latprof

#endif  // LATPROF_LCA_HPP
