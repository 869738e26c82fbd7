#ifndef LATPROF_FEATURES_HPP
#define LATPROF_FEATURES_HPP

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "latprof/types.hpp"

namespace latprof {

// Per-individual summary statistics of one ordinal sequence.
struct FeatureRow {
  std::string id;
  double mean_state = 0.0;   // mean of X_t
  double sd_state = 0.0;     // sample SD of X_t
  double mean_lag = 0.0;     // mean of X_t - X_{t-1}
  double sd_lag = 0.0;       // sample SD of the lags
  double p_lag_zero = 0.0;   // fraction of zero lags (temporal stability)
  int mode_state = 0;        // most frequent state, ties to the smallest
  double p_mode = 0.0;       // fraction of observations equal to the mode
  int n_obs = 0;             // sequence length, carried as metadata
};

// Statistic columns stacked over a cohort, with a leading constant column.
struct FeatureMatrix {
  static constexpr int kNumColumns = 8;
  static const std::array<std::string, kNumColumns>& column_names();

  std::vector<std::string> ids;  // row order matches the input cohort
  std::vector<int> n_obs;        // per-row metadata, not a layout column
  Eigen::MatrixXd values;        // N x 8: const, then the seven statistics

  Eigen::Index rows() const { return values.rows(); }
};

// Consecutive differences X_t - X_{t-1}; length T-1.
std::vector<int> lags(const DiscreteSequence& seq);

// All seven statistics for one sequence (length >= 2).
FeatureRow summarize_sequence(const DiscreteSequence& seq);

// Stack FeatureRows over the cohort in order.
FeatureMatrix build_feature_matrix(const Cohort& cohort);

}  // namespace latprof

#endif  // LATPROF_FEATURES_HPP
