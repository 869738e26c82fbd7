#ifndef LATPROF_EVAL_HPP
#define LATPROF_EVAL_HPP

#include <Eigen/Dense>

#include <vector>

#include "latprof/types.hpp"

namespace latprof {

// Embedded-chain MLE from discretized sequences. Consecutive equal states are
// ignored: LOCF injects artificial self-transitions and the generating
// matrices have zero diagonals, so counting self-pairs would bias every
// estimate toward the identity.
struct TransitionEstimate {
  JumpMatrix jump;
  std::vector<int> fallback_states;  // 1-based states with no observed
                                     // departures, set to uniform off-diagonal
};

TransitionEstimate estimate_transition_matrix(const Cohort& sequences, int C);

// Frobenius distance between two equally-sized transition matrices.
double frobenius(const JumpMatrix& a, const JumpMatrix& b);

// Greedy label matching on a K x K distance matrix F(l, j) = distance from
// estimated class l to true class j: repeatedly take the smallest remaining
// entry among unassigned rows and columns (ties to the lower l, then lower j).
// Returns tau with tau[l-1] = matched true class of estimated class l.
std::vector<int> relabel_greedy(const Eigen::MatrixXd& F);

std::vector<int> relabel(const std::vector<JumpMatrix>& estimated,
                         const std::vector<JumpMatrix>& truth);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double size_ratio = 0.0;
};

struct EvalReport {
  std::vector<int> relabeling;          // tau applied to estimated labels
  std::vector<ClassMetrics> per_class;  // indexed by true class
  Eigen::MatrixXi confusion;            // (predicted, actual) counts, sums to N
};

// One-vs-rest precision/recall/accuracy and estimated-to-true size ratios
// after applying tau to the estimated labels.
EvalReport classification_report(const std::vector<int>& true_labels,
                                 const std::vector<int>& est_labels,
                                 const std::vector<int>& tau);

}  // namespace latprof

#endif  // LATPROF_EVAL_HPP
