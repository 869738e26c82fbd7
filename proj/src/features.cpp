#include "latprof/features.hpp"

#include <cmath>
#include <map>

namespace latprof {

namespace {

double sample_sd(const std::vector<double>& xs, double mean) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

const std::array<std::string, FeatureMatrix::kNumColumns>&
FeatureMatrix::column_names() {
  static const std::array<std::string, kNumColumns> names = {
      "const",      "mean_state", "sd_state", "mean_lag",
      "sd_lag",     "p_lag_zero", "mode_state", "p_mode"};
  return names;
}

std::vector<int> lags(const DiscreteSequence& seq) {
  if (seq.length() < 2) {
    throw InsufficientDataError("lags: sequence '" + seq.id +
                                "' has fewer than 2 observations");
  }
  std::vector<int> out;
  out.reserve(seq.states.size() - 1);
  for (std::size_t t = 1; t < seq.states.size(); ++t) {
    out.push_back(seq.states[t] - seq.states[t - 1]);
  }
  return out;
}

FeatureRow summarize_sequence(const DiscreteSequence& seq) {
  const auto lag = lags(seq);  // also enforces length >= 2
  const int n = seq.length();

  FeatureRow row;
  row.id = seq.id;
  row.n_obs = n;

  std::vector<double> xs(seq.states.begin(), seq.states.end());
  row.mean_state = 0.0;
  for (double x : xs) row.mean_state += x;
  row.mean_state /= n;
  row.sd_state = sample_sd(xs, row.mean_state);

  std::vector<double> ls(lag.begin(), lag.end());
  row.mean_lag = 0.0;
  int zero_lags = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    row.mean_lag += ls[i];
    if (lag[i] == 0) ++zero_lags;
  }
  row.mean_lag /= static_cast<double>(ls.size());
  row.sd_lag = sample_sd(ls, row.mean_lag);
  row.p_lag_zero = static_cast<double>(zero_lags) / static_cast<double>(ls.size());

  // Mode with ties broken toward the smallest state. std::map iterates keys
  // in increasing order, so the first strict maximum is the smallest winner.
  std::map<int, int> counts;
  for (int s : seq.states) ++counts[s];
  int best_count = 0;
  for (const auto& [state, count] : counts) {
    if (count > best_count) {
      best_count = count;
      row.mode_state = state;
    }
  }
  row.p_mode = static_cast<double>(best_count) / static_cast<double>(n);
  return row;
}

FeatureMatrix build_feature_matrix(const Cohort& cohort) {
  if (cohort.empty()) {
    throw ValidationError("build_feature_matrix: empty cohort");
  }
  FeatureMatrix fm;
  const Eigen::Index n = static_cast<Eigen::Index>(cohort.size());
  fm.values.resize(n, FeatureMatrix::kNumColumns);
  fm.ids.reserve(cohort.size());
  fm.n_obs.reserve(cohort.size());

  for (Eigen::Index i = 0; i < n; ++i) {
    FeatureRow row;
    try {
      row = summarize_sequence(cohort[i]);
    } catch (const InsufficientDataError&) {
      throw InsufficientDataError("build_feature_matrix: sequence '" +
                                  cohort[i].id +
                                  "' has fewer than 2 observations");
    }
    fm.ids.push_back(row.id);
    fm.n_obs.push_back(row.n_obs);
    fm.values(i, 0) = 1.0;
    fm.values(i, 1) = row.mean_state;
    fm.values(i, 2) = row.sd_state;
    fm.values(i, 3) = row.mean_lag;
    fm.values(i, 4) = row.sd_lag;
    fm.values(i, 5) = row.p_lag_zero;
    fm.values(i, 6) = row.mode_state;
    fm.values(i, 7) = row.p_mode;
  }
  return fm;
}

}  // namespace latprof
