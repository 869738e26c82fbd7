#include "latprof/types.hpp"

#include <cmath>

namespace latprof {

namespace {
constexpr double kSumTol = 1e-12;
}

void JumpMatrix::validate() const {
  if (size < 2) {
    throw ValidationError("JumpMatrix: need at least 2 states, got " +
                          std::to_string(size));
  }
  if (probs.rows() != size || probs.cols() != size) {
    throw ValidationError("JumpMatrix: probs must be " + std::to_string(size) +
                          "x" + std::to_string(size));
  }
  for (int r = 0; r < size; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < size; ++c) {
      const double p = probs(r, c);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("JumpMatrix: entry (" + std::to_string(r + 1) +
                              "," + std::to_string(c + 1) + ") outside [0,1]");
      }
      if (r == c && p != 0.0) {
        throw ValidationError("JumpMatrix: nonzero diagonal at state " +
                              std::to_string(r + 1));
      }
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > kSumTol) {
      throw ValidationError("JumpMatrix: row " + std::to_string(r + 1) +
                            " sums to " + std::to_string(row_sum));
    }
  }
}

void ProbVector::validate() const {
  if (weights.size() == 0) {
    throw ValidationError("ProbVector: empty");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) {
      throw ValidationError("ProbVector: negative weight at position " +
                            std::to_string(i + 1));
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw ValidationError("ProbVector: weights sum to " + std::to_string(sum));
  }
}

ProbVector ProbVector::uniform(int c) {
  ProbVector p;
  p.weights = Eigen::VectorXd::Constant(c, 1.0 / c);
  return p;
}

ProbVector ProbVector::point_mass(int c, int state) {
  ProbVector p;
  p.weights = Eigen::VectorXd::Zero(c);
  p.weights[state - 1] = 1.0;
  return p;
}

int max_state(const Cohort& cohort) {
  int m = 0;
  for (const auto& seq : cohort) {
    for (int s : seq.states) m = std::max(m, s);
  }
  return m;
}

}  // namespace latprof
