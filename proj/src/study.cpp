#include "latprof/study.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "latprof/csv.hpp"
#include "latprof/rng.hpp"

namespace latprof {

namespace {

constexpr const char* kMetricNames[] = {"precision", "recall", "accuracy",
                                        "size_ratio"};

JumpMatrix uniform_offdiag_matrix(int C) {
  JumpMatrix j;
  j.size = C;
  j.probs = (Eigen::MatrixXd::Ones(C, C) - Eigen::MatrixXd::Identity(C, C)) /
            (C - 1);
  return j;
}

std::vector<int> split_equally(int n_total, int K) {
  std::vector<int> sizes(K, n_total / K);
  for (int k = 0; k < n_total % K; ++k) sizes[k] += 1;
  return sizes;
}

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::vector<int> assign_pca_kmeans(const Cohort& cohort, int K,
                                   const MethodOptions& opts,
                                   std::uint64_t seed) {
  const auto features = build_feature_matrix(cohort);
  const auto model = fit_pca(features, opts.pca_scale);
  const int k = std::min(opts.pca_components, model.rank());
  const Eigen::MatrixXd scores = project(model, features, k);
  return kmeans(scores, K, opts.kmeans_restarts, seed).assignments;
}

std::vector<int> assign_lca(const Cohort& cohort, int K, int C,
                            const MethodOptions& opts, std::uint64_t seed) {
  LcaOptions lca_opts;
  lca_opts.restarts = opts.lca_restarts;
  lca_opts.tol = opts.lca_tol;
  lca_opts.max_iter = opts.lca_max_iter;
  const auto model = fit_lca(cohort_to_wide(cohort), K, C, lca_opts, seed);
  return classify_lca(model);
}

std::vector<int> assign_lta(const Cohort& cohort, int K, int C,
                            const MethodOptions& opts, std::uint64_t seed) {
  LtaOptions lta_opts;
  lta_opts.restarts = opts.lta_restarts;
  lta_opts.tol = opts.lta_tol;
  lta_opts.max_iter = opts.lta_max_iter;
  const auto model = fit_lta(cohort, K, C, lta_opts, seed);
  std::vector<EmpiricalProfile> profiles;
  profiles.reserve(cohort.size());
  for (const auto& seq : cohort) profiles.push_back(empirical_profile(seq, C));
  return assign_by_profile(model.emissions, profiles).labels;
}

EvalReport evaluate_against_truth(const Cohort& cohort,
                                  const std::vector<int>& est_labels,
                                  const std::vector<JumpMatrix>& truth, int C) {
  if (est_labels.size() != cohort.size()) {
    throw ValidationError("evaluate_against_truth: label count mismatch");
  }
  const int K = static_cast<int>(truth.size());

  std::vector<int> true_labels;
  true_labels.reserve(cohort.size());
  for (const auto& seq : cohort) {
    if (!seq.true_class) {
      throw ValidationError("evaluate_against_truth: sequence '" + seq.id +
                            "' has no true class");
    }
    true_labels.push_back(*seq.true_class);
  }

  std::vector<JumpMatrix> estimated;
  estimated.reserve(K);
  for (int k = 1; k <= K; ++k) {
    Cohort members;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      if (est_labels[i] == k) members.push_back(cohort[i]);
    }
    try {
      estimated.push_back(estimate_transition_matrix(members, C).jump);
    } catch (const DegenerateInputError&) {
      // Empty (or change-free) cluster: fall back to the uniform off-diagonal
      // matrix, the same rule used for zero-departure rows.
      estimated.push_back(uniform_offdiag_matrix(C));
    }
  }

  const auto tau = relabel(estimated, truth);
  return classification_report(true_labels, est_labels, tau);
}

StudyConfig StudyConfig::from_json(const nlohmann::json& j) {
  StudyConfig cfg;
  if (j.contains("settings")) cfg.settings = j["settings"].get<std::vector<int>>();
  if (j.contains("n_totals")) cfg.n_totals = j["n_totals"].get<std::vector<int>>();
  if (j.contains("T")) cfg.T = j["T"].get<int>();
  if (j.contains("replicates")) cfg.replicates = j["replicates"].get<int>();
  if (j.contains("methods")) {
    cfg.methods = j["methods"].get<std::vector<std::string>>();
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("init")) {
    ProbVector init;
    const auto w = j["init"].get<std::vector<double>>();
    init.weights = Eigen::Map<const Eigen::VectorXd>(
        w.data(), static_cast<Eigen::Index>(w.size()));
    cfg.init = init;
  }
  auto& m = cfg.method_opts;
  if (j.contains("pca_components")) m.pca_components = j["pca_components"].get<int>();
  if (j.contains("pca_scale")) m.pca_scale = j["pca_scale"].get<bool>();
  if (j.contains("kmeans_restarts")) m.kmeans_restarts = j["kmeans_restarts"].get<int>();
  if (j.contains("lca_restarts")) m.lca_restarts = j["lca_restarts"].get<int>();
  if (j.contains("lca_tol")) m.lca_tol = j["lca_tol"].get<double>();
  if (j.contains("lca_max_iter")) m.lca_max_iter = j["lca_max_iter"].get<int>();
  if (j.contains("lta_restarts")) m.lta_restarts = j["lta_restarts"].get<int>();
  if (j.contains("lta_tol")) m.lta_tol = j["lta_tol"].get<double>();
  if (j.contains("lta_max_iter")) m.lta_max_iter = j["lta_max_iter"].get<int>();
  return cfg;
}

nlohmann::json StudyConfig::to_json() const {
  nlohmann::json j;
  j["settings"] = settings;
  j["n_totals"] = n_totals;
  j["T"] = T;
  j["replicates"] = replicates;
  j["methods"] = methods;
  j["seed"] = seed;
  if (init) {
    std::vector<double> w(init->weights.data(),
                          init->weights.data() + init->weights.size());
    j["init"] = w;
  }
  j["pca_components"] = method_opts.pca_components;
  j["pca_scale"] = method_opts.pca_scale;
  j["kmeans_restarts"] = method_opts.kmeans_restarts;
  j["lca_restarts"] = method_opts.lca_restarts;
  j["lca_tol"] = method_opts.lca_tol;
  j["lca_max_iter"] = method_opts.lca_max_iter;
  j["lta_restarts"] = method_opts.lta_restarts;
  j["lta_tol"] = method_opts.lta_tol;
  j["lta_max_iter"] = method_opts.lta_max_iter;
  return j;
}

StudyResult run_simulation_study(const StudyConfig& cfg) {
  if (cfg.replicates < 1) {
    throw ValidationError("study: replicates must be >= 1");
  }
  if (cfg.T < 2) {
    throw ValidationError("study: T must be >= 2");
  }
  for (const auto& m : cfg.methods) {
    if (m != "pca_kmeans" && m != "lca" && m != "lta") {
      throw ValidationError("study: unknown method '" + m + "'");
    }
  }

  StudyResult result;
  nlohmann::json cells = nlohmann::json::array();

  for (int setting_id : cfg.settings) {
    const auto setting = builtin_setting(setting_id);
    const int K = setting.num_classes();
    const int C = setting.matrices.front().size;
    const ProbVector init = cfg.init ? *cfg.init : ProbVector::uniform(C);

    for (int n_total : cfg.n_totals) {
      if (n_total < K) {
        throw ValidationError("study: N = " + std::to_string(n_total) +
                              " below the class count");
      }
      const auto class_sizes = split_equally(n_total, K);
      for (int rep = 1; rep <= cfg.replicates; ++rep) {
        const std::uint64_t cohort_seed =
            derive_seed(cfg.seed, {static_cast<std::uint64_t>(setting_id),
                                   static_cast<std::uint64_t>(n_total),
                                   static_cast<std::uint64_t>(rep)});
        const auto cohort =
            simulate_cohort(setting, class_sizes, cfg.T, init, cohort_seed);

        nlohmann::json cell;
        cell["setting"] = setting.name;
        cell["N"] = n_total;
        cell["replicate"] = rep;
        cell["cohort_seed"] = cohort_seed;
        nlohmann::json method_info = nlohmann::json::object();

        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
          const auto& method = cfg.methods[mi];
          const std::uint64_t method_seed =
              derive_seed(cohort_seed, {static_cast<std::uint64_t>(mi + 1)});
          const double t0 = now_ms();
          nlohmann::json info;
          info["seed"] = method_seed;
          try {
            std::vector<int> labels;
            if (method == "pca_kmeans") {
              labels = assign_pca_kmeans(cohort, K, cfg.method_opts, method_seed);
            } else if (method == "lca") {
              labels = assign_lca(cohort, K, C, cfg.method_opts, method_seed);
            } else {
              labels = assign_lta(cohort, K, C, cfg.method_opts, method_seed);
            }
            const auto report =
                evaluate_against_truth(cohort, labels, setting.matrices, C);
            for (int k = 1; k <= K; ++k) {
              const auto& m = report.per_class[k - 1];
              const double values[] = {m.precision, m.recall, m.accuracy,
                                       m.size_ratio};
              for (int v = 0; v < 4; ++v) {
                result.rows.push_back({setting.name, n_total, rep, method, k,
                                       kMetricNames[v], values[v], "ok"});
              }
            }
            info["status"] = "ok";
          } catch (const std::exception& err) {
            result.rows.push_back(
                {setting.name, n_total, rep, method, 0, "error", 0.0, "failed"});
            info["status"] = "failed";
            info["error"] = err.what();
          }
          info["ms"] = now_ms() - t0;
          method_info[method] = std::move(info);
        }
        cell["methods"] = std::move(method_info);
        cells.push_back(std::move(cell));
      }
      if (cfg.progress) {
        cfg.progress(setting.name + " N=" + std::to_string(n_total) + ": " +
                     std::to_string(cfg.replicates) + " replicates done");
      }
    }
  }

  result.manifest["config"] = cfg.to_json();
  result.manifest["cells"] = std::move(cells);
  result.manifest["version"] = "0.1.0";
  return result;
}

AnalysisResult run_analysis(const Cohort& cohort, const AnalysisOptions& opts) {
  if (cohort.empty()) {
    throw ValidationError("run_analysis: empty cohort");
  }
  if (opts.K < 2) {
    throw ValidationError("run_analysis: K must be >= 2 (silhouette and "
                          "cluster contrasts are undefined for K = 1)");
  }

  AnalysisResult result;
  const auto features = build_feature_matrix(cohort);
  result.ids = features.ids;
  result.pca = fit_pca(features, opts.pca_scale);
  const int k = std::min(opts.pca_components, result.pca.rank());
  const Eigen::MatrixXd scores = project(result.pca, features, k);

  result.clustering = kmeans(scores, opts.K, opts.kmeans_restarts,
                             derive_seed(opts.seed, {1}));

  // Canonical labels: clusters ordered by ascending mean of mean_state.
  const int K = opts.K;
  std::vector<double> key(K, 0.0);
  std::vector<int> count(K, 0);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const int c = result.clustering.assignments[i] - 1;
    key[c] += features.values(static_cast<Eigen::Index>(i), 1);
    count[c] += 1;
  }
  for (int c = 0; c < K; ++c) key[c] /= count[c];
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return key[a] < key[b]; });
  std::vector<int> new_label(K);
  for (int rank = 0; rank < K; ++rank) new_label[order[rank]] = rank + 1;

  result.assignments.reserve(cohort.size());
  for (int a : result.clustering.assignments) {
    result.assignments.push_back(new_label[a - 1]);
  }
  Eigen::MatrixXd reordered = result.clustering.centroids;
  for (int c = 0; c < K; ++c) {
    reordered.row(new_label[c] - 1) = result.clustering.centroids.row(c);
  }
  result.clustering.centroids = std::move(reordered);
  result.clustering.assignments = result.assignments;

  // Per-cluster means of the summary statistics, Table-4 style.
  result.table.columns = {"cluster",    "sd_state", "mean_state",
                          "mean_lag",   "sd_lag",   "p_lag_zero",
                          "mean_n_obs", "mode_state", "p_mode", "n_k"};
  result.table.values = Eigen::MatrixXd::Zero(K, 10);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const int c = result.assignments[i] - 1;
    const auto row = features.values.row(static_cast<Eigen::Index>(i));
    result.table.values(c, 1) += row[2];  // sd_state
    result.table.values(c, 2) += row[1];  // mean_state
    result.table.values(c, 3) += row[3];  // mean_lag
    result.table.values(c, 4) += row[4];  // sd_lag
    result.table.values(c, 5) += row[5];  // p_lag_zero
    result.table.values(c, 6) += features.n_obs[i];
    result.table.values(c, 7) += row[6];  // mode_state
    result.table.values(c, 8) += row[7];  // p_mode
    result.table.values(c, 9) += 1.0;     // n_k
  }
  for (int c = 0; c < K; ++c) {
    result.table.values(c, 0) = c + 1;
    const double nk = result.table.values(c, 9);
    for (int j = 1; j <= 8; ++j) result.table.values(c, j) /= nk;
  }

  if (opts.fuzzy) {
    result.fuzzy = fuzzy_cmeans(scores, opts.K, opts.fuzzifier, 1e-6, 300,
                                derive_seed(opts.seed, {2}));
  }
  for (int kk : opts.silhouette_ks) {
    if (kk < 2 || kk > static_cast<int>(cohort.size())) continue;
    const auto hard =
        kmeans(scores, kk, opts.kmeans_restarts,
               derive_seed(opts.seed, {3, static_cast<std::uint64_t>(kk)}));
    result.silhouette_by_k[kk] = silhouette(scores, hard.assignments).mean;
  }
  return result;
}

std::string cluster_table_to_csv(const ClusterSummaryTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += ',';
    out += table.columns[j];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(table.values(r, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace latprof
