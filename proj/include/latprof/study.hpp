#ifndef LATPROF_STUDY_HPP
#define LATPROF_STUDY_HPP

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latprof/clustering.hpp"
#include "latprof/eval.hpp"
#include "latprof/io.hpp"
#include "latprof/lca.hpp"
#include "latprof/lta.hpp"
#include "latprof/markov_sim.hpp"
#include "latprof/pca.hpp"

namespace latprof {

struct MethodOptions {
  // PCA + K-means
  int pca_components = 2;
  bool pca_scale = true;
  int kmeans_restarts = 25;
  // EM baselines (defaults follow the respective module defaults)
  int lca_restarts = 10;
  double lca_tol = 1e-6;
  int lca_max_iter = 1000;
  int lta_restarts = 10;
  double lta_tol = 1e-6;
  int lta_max_iter = 30;
};

// Per-method label estimation on a cohort (labels in 1..K, arbitrary order;
// relabeling against ground truth is the evaluator's job).
std::vector<int> assign_pca_kmeans(const Cohort& cohort, int K,
                                   const MethodOptions& opts,
                                   std::uint64_t seed);
std::vector<int> assign_lca(const Cohort& cohort, int K, int C,
                            const MethodOptions& opts, std::uint64_t seed);
std::vector<int> assign_lta(const Cohort& cohort, int K, int C,
                            const MethodOptions& opts, std::uint64_t seed);

// Estimate per-cluster transition matrices, relabel them against the truth by
// greedy Frobenius matching, and score the relabeled assignment. A cluster
// with no members (or no observed state changes) falls back to the uniform
// off-diagonal matrix so the matching stays well-defined.
EvalReport evaluate_against_truth(const Cohort& cohort,
                                  const std::vector<int>& est_labels,
                                  const std::vector<JumpMatrix>& truth, int C);

struct StudyConfig {
  std::vector<int> settings = {1, 2, 3, 4};
  std::vector<int> n_totals = {600, 900, 1200, 1500};
  int T = 44;
  int replicates = 20;
  std::vector<std::string> methods = {"pca_kmeans", "lca", "lta"};
  std::uint64_t seed = 1;
  std::optional<ProbVector> init;  // default: uniform over 1..C
  MethodOptions method_opts;
  // Called once per completed (setting, N) cell group; not serialized.
  std::function<void(const std::string&)> progress;

  static StudyConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct StudyResult {
  std::vector<TidyRow> rows;
  nlohmann::json manifest;
};

// The full simulation study: for every (setting, N, replicate) simulate a
// cohort split equally across the setting's classes, run each method,
// relabel, and score. Method failures become status rows; the study never
// aborts. Deterministic given the seed.
StudyResult run_simulation_study(const StudyConfig& cfg);

struct AnalysisOptions {
  int K = 3;
  int pca_components = 2;
  bool pca_scale = true;
  int kmeans_restarts = 25;
  bool fuzzy = false;
  double fuzzifier = 2.0;
  std::vector<int> silhouette_ks;  // e.g. {2, 3, 4}
  std::uint64_t seed = 1;
};

struct ClusterSummaryTable {
  std::vector<std::string> columns;  // cluster, per-cluster feature means, n_k
  Eigen::MatrixXd values;            // K rows
};

struct AnalysisResult {
  std::vector<std::string> ids;
  std::vector<int> assignments;  // labels ordered by ascending mean state
  PcaModel pca;
  HardClustering clustering;     // centroids permuted to match the labels
  ClusterSummaryTable table;
  std::optional<SoftClustering> fuzzy;
  std::map<int, double> silhouette_by_k;
};

// The real-data pipeline: features -> PCA -> K-means, plus the per-cluster
// mean-statistics table and optional fuzzy/silhouette diagnostics.
AnalysisResult run_analysis(const Cohort& cohort, const AnalysisOptions& opts);

std::string cluster_table_to_csv(const ClusterSummaryTable& table);

}  // namespace latprof

#endif  // LATPROF_STUDY_HPP
