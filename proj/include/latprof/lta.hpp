#ifndef LATPROF_LTA_HPP
#define LATPROF_LTA_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "latprof/types.hpp"

namespace latprof {

// Latent transition analysis: a hidden Markov model with K latent states and
// time-homogeneous categorical emissions over C observed states.
struct LtaModel {
  Eigen::VectorXd initial;     // K
  Eigen::MatrixXd transitions; // K x K, rows sum 1
  Eigen::MatrixXd emissions;   // K x C, rows sum 1
  double loglik = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::vector<double> loglik_trace;  // winning restart, per EM iteration

  int num_classes() const { return static_cast<int>(initial.size()); }
  int num_states() const { return static_cast<int>(emissions.cols()); }
};

// The default iteration budget is deliberately shallow. Run deep enough and
// EM trades the trait-like mixture fit (near-identity transitions, emission
// rows ~ class profiles) for a higher-likelihood within-individual dynamics
// fit whose emission rows no longer resemble any class profile, which defeats
// the L2 profile hardening this model feeds. The budget is configurable;
// tol is relative to |loglik|.
struct LtaOptions {
  int restarts = 10;
  double tol = 1e-6;
  int max_iter = 30;
  double smoothing = 1e-6;  // additive smoothing on transition/emission rows
};

// An individual's observed state-frequency vector over 1..C.
struct EmpiricalProfile {
  Eigen::VectorXd h;
};

// Baum-Welch pooled over the cohort (sequences may vary in length), best of
// `restarts` by log-likelihood. Deterministic given seed.
LtaModel fit_lta(const Cohort& cohort, int K, int C, const LtaOptions& opts,
                 std::uint64_t seed);

// Data log-likelihood of a model on a cohort.
double lta_loglik(const LtaModel& model, const Cohort& cohort);

// Smoothing posteriors P(Z_t = k | sequence) for one sequence; rows sum to 1.
Eigen::MatrixXd lta_posteriors(const LtaModel& model,
                               const DiscreteSequence& seq);

EmpiricalProfile empirical_profile(const DiscreteSequence& seq, int C);

// Default hardening rule: assign each individual to the class whose emission
// row is nearest its empirical profile in L2; ties to the lower class.
// Returns labels plus the full distance matrix G (N x K).
struct ProfileAssignment {
  std::vector<int> labels;
  Eigen::MatrixXd distances;
};
ProfileAssignment assign_by_profile(const Eigen::MatrixXd& emissions,
                                    const std::vector<EmpiricalProfile>& profiles);

// Alternative hardening for sensitivity analysis: the modal state of each
// individual's Viterbi path.
std::vector<int> assign_by_viterbi(const LtaModel& model, const Cohort& cohort);

}  // namespace latprof

#endif  // LATPROF_LTA_HPP
