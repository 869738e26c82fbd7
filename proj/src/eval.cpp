#include "latprof/eval.hpp"

#include <cmath>
#include <limits>

namespace latprof {

TransitionEstimate estimate_transition_matrix(const Cohort& sequences, int C) {
  if (C < 2) {
    throw ValidationError("estimate_transition_matrix: C must be >= 2");
  }
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(C, C);
  long long changes = 0;
  for (const auto& seq : sequences) {
    for (std::size_t t = 0; t + 1 < seq.states.size(); ++t) {
      const int a = seq.states[t];
      const int b = seq.states[t + 1];
      if (a < 1 || a > C || b < 1 || b > C) {
        throw ValidationError("estimate_transition_matrix: state outside 1.." +
                              std::to_string(C) + " in sequence '" + seq.id +
                              "'");
      }
      if (a != b) {
        counts(a - 1, b - 1) += 1.0;
        ++changes;
      }
    }
  }
  if (changes == 0) {
    throw DegenerateInputError(
        "estimate_transition_matrix: no state changes observed");
  }

  TransitionEstimate est;
  est.jump.size = C;
  est.jump.probs.resize(C, C);
  for (int r = 0; r < C; ++r) {
    const double row_sum = counts.row(r).sum();
    if (row_sum > 0.0) {
      est.jump.probs.row(r) = counts.row(r) / row_sum;
    } else {
      // No departures seen from this state: uniform over the off-diagonal so
      // downstream Frobenius distances stay finite.
      est.jump.probs.row(r).setConstant(1.0 / (C - 1));
      est.jump.probs(r, r) = 0.0;
      est.fallback_states.push_back(r + 1);
    }
  }
  est.jump.validate();
  return est;
}

double frobenius(const JumpMatrix& a, const JumpMatrix& b) {
  if (a.size != b.size) {
    throw ValidationError("frobenius: dimension mismatch (" +
                          std::to_string(a.size) + " vs " +
                          std::to_string(b.size) + ")");
  }
  return (a.probs - b.probs).norm();
}

std::vector<int> relabel_greedy(const Eigen::MatrixXd& F) {
  const int K = static_cast<int>(F.rows());
  if (F.cols() != K) {
    throw ValidationError("relabel_greedy: distance matrix must be square");
  }
  std::vector<int> tau(K, 0);
  std::vector<bool> row_done(K, false), col_done(K, false);
  for (int step = 0; step < K; ++step) {
    int best_l = -1, best_j = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int l = 0; l < K; ++l) {
      if (row_done[l]) continue;
      for (int j = 0; j < K; ++j) {
        if (col_done[j]) continue;
        if (F(l, j) < best) {  // strict: ties stay with the lower (l, j)
          best = F(l, j);
          best_l = l;
          best_j = j;
        }
      }
    }
    tau[best_l] = best_j + 1;
    row_done[best_l] = true;
    col_done[best_j] = true;
  }
  return tau;
}

std::vector<int> relabel(const std::vector<JumpMatrix>& estimated,
                         const std::vector<JumpMatrix>& truth) {
  if (estimated.size() != truth.size() || estimated.empty()) {
    throw ValidationError("relabel: need equally many estimated and true matrices");
  }
  const int K = static_cast<int>(estimated.size());
  Eigen::MatrixXd F(K, K);
  for (int l = 0; l < K; ++l) {
    for (int j = 0; j < K; ++j) {
      F(l, j) = frobenius(estimated[l], truth[j]);
    }
  }
  return relabel_greedy(F);
}

EvalReport classification_report(const std::vector<int>& true_labels,
                                 const std::vector<int>& est_labels,
                                 const std::vector<int>& tau) {
  if (true_labels.size() != est_labels.size()) {
    throw ValidationError("classification_report: label vectors differ in length");
  }
  const int K = static_cast<int>(tau.size());
  const int n = static_cast<int>(true_labels.size());

  EvalReport report;
  report.relabeling = tau;
  report.confusion = Eigen::MatrixXi::Zero(K, K);
  for (int i = 0; i < n; ++i) {
    const int z = true_labels[i];
    const int zhat = est_labels[i];
    if (z < 1 || z > K || zhat < 1 || zhat > K) {
      throw ValidationError("classification_report: label outside 1.." +
                            std::to_string(K) + " at row " + std::to_string(i + 1));
    }
    report.confusion(tau[zhat - 1] - 1, z - 1) += 1;
  }

  report.per_class.resize(K);
  for (int k = 0; k < K; ++k) {
    const double tp = report.confusion(k, k);
    const double fp = report.confusion.row(k).sum() - tp;
    const double fn = report.confusion.col(k).sum() - tp;
    const double tn = n - tp - fp - fn;
    auto& m = report.per_class[k];
    m.precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
    m.recall = (tp + fn) > 0.0 ? tp / (tp + fn) : 0.0;
    m.accuracy = (tp + tn) / n;
    m.size_ratio = (tp + fn) > 0.0 ? (tp + fp) / (tp + fn) : 0.0;
  }
  return report;
}

}  // namespace latprof
