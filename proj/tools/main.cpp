// latprof command line: simulate ordinal EMA-style cohorts, extract sequence
// features, cluster, fit the LCA/LTA baselines, and run the full recovery
// study. Every subcommand is deterministic given --seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "latprof/csv.hpp"
#include "latprof/ingest.hpp"
#include "latprof/io.hpp"
#include "latprof/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace latprof;

namespace {

json g_config;  // optional --config file, provides defaults; flags override

template <typename T>
T cfg_or(const std::string& key, T fallback) {
  if (g_config.contains(key)) return g_config[key].get<T>();
  return fallback;
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

Cohort load_cohort(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  return cohort_from_csv(in);
}

ProbVector parse_init(const std::string& csv, int c) {
  if (csv.empty()) return ProbVector::uniform(c);
  const auto fields = split_csv_line(csv);
  ProbVector init;
  init.weights.resize(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto v = parse_double(fields[i]);
    if (!v) throw ValidationError("--init: bad number '" + fields[i] + "'");
    init.weights[static_cast<Eigen::Index>(i)] = *v;
  }
  init.validate();
  return init;
}

std::vector<std::string> kn_columns(const std::string& prefix, int k) {
  std::vector<std::string> cols;
  for (int i = 1; i <= k; ++i) cols.push_back(prefix + std::to_string(i));
  return cols;
}

void add_simulate(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "simulate", "Simulate a class-labeled cohort from a built-in setting");
  auto setting = std::make_shared<int>(cfg_or("setting", 1));
  auto n_per_class = std::make_shared<std::vector<int>>();
  auto T = std::make_shared<int>(cfg_or("T", 44));
  auto seed = std::make_shared<std::uint64_t>(cfg_or("seed", 1));
  auto init_csv = std::make_shared<std::string>(cfg_or<std::string>("init", ""));
  auto rate = std::make_shared<double>(cfg_or("sojourn_rate", 1.0));
  auto law = std::make_shared<std::string>(
      cfg_or<std::string>("sojourn_law", "exponential"));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));

  cmd->add_option("--setting", *setting, "Built-in setting 1..4")
      ->check(CLI::Range(1, 4));
  cmd->add_option("--n-per-class", *n_per_class,
                  "Class sizes (one value per class, or one value for all)")
      ->delimiter(',');
  cmd->add_option("--T", *T, "Number of discrete time points past t=0");
  cmd->add_option("--seed", *seed, "Master seed");
  cmd->add_option("--init", *init_csv,
                  "Initial state distribution as comma-separated probabilities "
                  "(default uniform)");
  cmd->add_option("--sojourn-rate", *rate, "Sojourn rate (mean sojourn = 1/rate)");
  cmd->add_option("--sojourn-law", *law, "exponential | constant")
      ->check(CLI::IsMember({"exponential", "constant"}));
  cmd->add_option("--out", *out, "Output directory");

  cmd->callback([=]() {
    auto s = builtin_setting(*setting);
    s.sojourn_rate = *rate;
    s.sojourn_law =
        *law == "constant" ? SojournLaw::kConstant : SojournLaw::kExponential;
    std::vector<int> sizes = *n_per_class;
    if (sizes.empty()) sizes = {200, 200, 200};
    if (sizes.size() == 1) sizes.assign(s.matrices.size(), sizes.front());
    const auto init = parse_init(*init_csv, s.matrices.front().size);
    const auto cohort = simulate_cohort(s, sizes, *T, init, *seed);
    write_file(out_path(*out, "cohort.csv"), cohort_to_csv(cohort));

    json manifest;
    manifest["setting"] = s.name;
    manifest["seed"] = *seed;
    manifest["T"] = *T;
    manifest["class_sizes"] = sizes;
    manifest["sojourn_rate"] = *rate;
    manifest["sojourn_law"] = *law;
    std::vector<double> w(init.weights.data(),
                          init.weights.data() + init.weights.size());
    manifest["init"] = w;
    write_file(out_path(*out, "manifest.json"), manifest.dump(2) + "\n");
    std::cout << "wrote " << cohort.size() << " sequences to "
              << out_path(*out, "cohort.csv") << "\n";
  });
}

void add_features(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "features", "Compute per-individual summary statistics from a cohort CSV");
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Cohort CSV (id,t,state,true_class)")
      ->required();
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    const auto fm = build_feature_matrix(load_cohort(*input));
    write_file(out_path(*out, "features.csv"), features_to_csv(fm));
    std::cout << "wrote " << fm.rows() << " feature rows to "
              << out_path(*out, "features.csv") << "\n";
  });
}

void add_pca(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "pca", "Principal components of a feature matrix, with scores and scree");
  auto input = std::make_shared<std::string>();
  auto components = std::make_shared<int>(cfg_or("components", 2));
  auto no_scale = std::make_shared<bool>(false);
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Feature CSV")->required();
  cmd->add_option("--components", *components, "Score columns to emit");
  cmd->add_flag("--no-scale", *no_scale, "Covariance instead of correlation PCA");
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    std::ifstream in(*input);
    if (!in) throw ValidationError("cannot open: " + *input);
    const auto fm = features_from_csv(in);
    const auto model = fit_pca(fm, !*no_scale);
    const int k = std::min(*components, model.rank());
    const auto scores = project(model, fm, k);
    write_file(out_path(*out, "pca.json"), pca_to_json(model).dump(2) + "\n");
    write_file(out_path(*out, "scores.csv"),
               id_table_to_csv(fm.ids, kn_columns("pc", k), scores));
    const auto table = scree(model);
    std::cout << "variance explained:";
    for (Eigen::Index i = 0; i < table.fractions.size(); ++i) {
      std::cout << " " << format_double(table.fractions[i]);
    }
    std::cout << "\n";
  });
}

void add_cluster(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "cluster", "K-means (default) or fuzzy C-means on a score table");
  auto input = std::make_shared<std::string>();
  auto k = std::make_shared<int>(cfg_or("k", 3));
  auto restarts = std::make_shared<int>(cfg_or("restarts", 25));
  auto fuzzifier = std::make_shared<double>(cfg_or("fuzzifier", 2.0));
  auto soft = std::make_shared<bool>(false);
  auto seed = std::make_shared<std::uint64_t>(cfg_or("seed", 1));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Score CSV (id,pc1,...)")->required();
  cmd->add_option("--k", *k, "Number of clusters");
  cmd->add_option("--restarts", *restarts, "K-means restarts");
  cmd->add_option("--fuzzifier", *fuzzifier, "Fuzzy exponent m > 1");
  cmd->add_flag("--soft", *soft, "Fuzzy C-means instead of K-means");
  cmd->add_option("--seed", *seed, "Seed");
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    std::ifstream in(*input);
    if (!in) throw ValidationError("cannot open: " + *input);
    const auto [ids, points] = id_table_from_csv(in);
    // Raw cluster labels are arbitrary; report larger clusters first.
    json summary;
    if (*soft) {
      auto result = fuzzy_cmeans(points, *k, *fuzzifier, 1e-6, 300, *seed);
      auto labels = harden(result);
      const auto map = size_ordered_relabeling(labels, *k);
      Eigen::MatrixXd membership(result.membership.rows(), *k);
      Eigen::MatrixXd centroids(*k, result.centroids.cols());
      for (int c = 0; c < *k; ++c) {
        membership.col(map[c] - 1) = result.membership.col(c);
        centroids.row(map[c] - 1) = result.centroids.row(c);
      }
      result.membership = std::move(membership);
      result.centroids = std::move(centroids);
      for (int& a : labels) a = map[a - 1];
      write_file(out_path(*out, "membership.csv"),
                 id_table_to_csv(ids, kn_columns("m", *k), result.membership));
      write_file(out_path(*out, "assignments.csv"),
                 assignments_to_csv(ids, labels));
      summary = soft_clustering_to_json(result);
      if (*k >= 2) {
        summary["mean_silhouette"] = silhouette(points, labels).mean;
      }
    } else {
      auto result = kmeans(points, *k, *restarts, *seed);
      const auto map = size_ordered_relabeling(result.assignments, *k);
      Eigen::MatrixXd centroids(*k, result.centroids.cols());
      for (int c = 0; c < *k; ++c) {
        centroids.row(map[c] - 1) = result.centroids.row(c);
      }
      result.centroids = std::move(centroids);
      for (int& a : result.assignments) a = map[a - 1];
      write_file(out_path(*out, "assignments.csv"),
                 assignments_to_csv(ids, result.assignments));
      summary = hard_clustering_to_json(result);
      if (*k >= 2) {
        summary["mean_silhouette"] = silhouette(points, result.assignments).mean;
      }
    }
    write_file(out_path(*out, "cluster_summary.json"), summary.dump(2) + "\n");
    std::cout << "wrote " << out_path(*out, "assignments.csv") << "\n";
  });
}

void add_lca(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "lca", "Latent class analysis baseline on a fixed-length cohort");
  auto input = std::make_shared<std::string>();
  auto k = std::make_shared<int>(cfg_or("k", 3));
  auto c = std::make_shared<int>(cfg_or("c", 5));
  auto restarts = std::make_shared<int>(cfg_or("restarts", 10));
  auto tol = std::make_shared<double>(cfg_or("tol", 1e-6));
  auto max_iter = std::make_shared<int>(cfg_or("max_iter", 1000));
  auto seed = std::make_shared<std::uint64_t>(cfg_or("seed", 1));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Cohort CSV")->required();
  cmd->add_option("--k", *k, "Latent classes");
  cmd->add_option("--c", *c, "Number of ordinal states");
  cmd->add_option("--restarts", *restarts, "EM restarts");
  cmd->add_option("--tol", *tol, "Log-likelihood convergence tolerance");
  cmd->add_option("--max-iter", *max_iter, "EM iteration cap");
  cmd->add_option("--seed", *seed, "Seed");
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    const auto cohort = load_cohort(*input);
    LcaOptions opts;
    opts.restarts = *restarts;
    opts.tol = *tol;
    opts.max_iter = *max_iter;
    const auto model = fit_lca(cohort_to_wide(cohort), *k, *c, opts, *seed);
    std::vector<std::string> ids;
    for (const auto& seq : cohort) ids.push_back(seq.id);
    write_file(out_path(*out, "lca_model.json"),
               lca_to_json(model).dump(2) + "\n");
    write_file(out_path(*out, "posterior.csv"),
               id_table_to_csv(ids, kn_columns("m", *k), model.posterior));
    write_file(out_path(*out, "labels.csv"),
               assignments_to_csv(ids, classify_lca(model)));
    std::cout << "loglik " << format_double(model.loglik) << " after "
              << model.n_iter << " iterations\n";
  });
}

void add_lta(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "lta", "Latent transition analysis baseline (categorical hidden Markov)");
  auto input = std::make_shared<std::string>();
  auto k = std::make_shared<int>(cfg_or("k", 3));
  auto c = std::make_shared<int>(cfg_or("c", 5));
  auto restarts = std::make_shared<int>(cfg_or("restarts", 10));
  auto tol = std::make_shared<double>(cfg_or("tol", 1e-6));
  auto max_iter = std::make_shared<int>(cfg_or("max_iter", 30));
  auto seed = std::make_shared<std::uint64_t>(cfg_or("seed", 1));
  auto harden_rule = std::make_shared<std::string>(
      cfg_or<std::string>("harden", "profile"));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Cohort CSV (ragged lengths accepted)")
      ->required();
  cmd->add_option("--k", *k, "Latent classes");
  cmd->add_option("--c", *c, "Number of ordinal states");
  cmd->add_option("--restarts", *restarts, "EM restarts");
  cmd->add_option("--tol", *tol, "Log-likelihood convergence tolerance");
  cmd->add_option("--max-iter", *max_iter, "EM iteration cap");
  cmd->add_option("--seed", *seed, "Seed");
  cmd->add_option("--harden", *harden_rule,
                  "profile (L2 to emission rows) | viterbi (modal path state)")
      ->check(CLI::IsMember({"profile", "viterbi"}));
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    const auto cohort = load_cohort(*input);
    LtaOptions opts;
    opts.restarts = *restarts;
    opts.tol = *tol;
    opts.max_iter = *max_iter;
    const auto model = fit_lta(cohort, *k, *c, opts, *seed);
    std::vector<std::string> ids;
    for (const auto& seq : cohort) ids.push_back(seq.id);

    std::vector<EmpiricalProfile> profiles;
    for (const auto& seq : cohort) {
      profiles.push_back(empirical_profile(seq, *c));
    }
    const auto by_profile = assign_by_profile(model.emissions, profiles);
    const auto labels = *harden_rule == "viterbi"
                            ? assign_by_viterbi(model, cohort)
                            : by_profile.labels;

    write_file(out_path(*out, "lta_model.json"),
               lta_to_json(model).dump(2) + "\n");
    write_file(out_path(*out, "labels.csv"), assignments_to_csv(ids, labels));
    write_file(out_path(*out, "distances.csv"),
               id_table_to_csv(ids, kn_columns("g", *k), by_profile.distances));
    std::cout << "loglik " << format_double(model.loglik) << " after "
              << model.n_iter << " iterations\n";
  });
}

void add_evaluate(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "evaluate",
      "Relabel estimated classes against a setting's truth and score them");
  auto input = std::make_shared<std::string>();
  auto labels_path = std::make_shared<std::string>();
  auto setting = std::make_shared<int>(cfg_or("setting", 1));
  auto c = std::make_shared<int>(cfg_or("c", 5));
  auto method = std::make_shared<std::string>(
      cfg_or<std::string>("method", "custom"));
  auto replicate = std::make_shared<int>(cfg_or("replicate", 1));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Cohort CSV with true_class")->required();
  cmd->add_option("--labels", *labels_path, "Assignment CSV (id,cluster)")
      ->required();
  cmd->add_option("--setting", *setting, "Setting whose matrices are the truth")
      ->check(CLI::Range(1, 4));
  cmd->add_option("--c", *c, "Number of ordinal states");
  cmd->add_option("--method", *method, "Method label for the tidy output");
  cmd->add_option("--replicate", *replicate, "Replicate label for the tidy output");
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    const auto cohort = load_cohort(*input);
    std::ifstream in(*labels_path);
    if (!in) throw ValidationError("cannot open: " + *labels_path);
    const auto [ids, labels] = assignments_from_csv(in);
    if (ids.size() != cohort.size()) {
      throw ValidationError("evaluate: cohort and labels differ in length");
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] != cohort[i].id) {
        throw ValidationError("evaluate: id mismatch at row " +
                              std::to_string(i + 1));
      }
    }
    const auto truth = builtin_setting(*setting);
    const auto report =
        evaluate_against_truth(cohort, labels, truth.matrices, *c);
    write_file(out_path(*out, "eval.json"),
               eval_report_to_json(report).dump(2) + "\n");

    std::vector<TidyRow> rows;
    static const char* metric_names[] = {"precision", "recall", "accuracy",
                                         "size_ratio"};
    for (std::size_t k = 0; k < report.per_class.size(); ++k) {
      const auto& m = report.per_class[k];
      const double values[] = {m.precision, m.recall, m.accuracy, m.size_ratio};
      for (int v = 0; v < 4; ++v) {
        rows.push_back({truth.name, static_cast<int>(cohort.size()),
                        *replicate, *method, static_cast<int>(k) + 1,
                        metric_names[v], values[v], "ok"});
      }
    }
    write_file(out_path(*out, "metrics.csv"), tidy_to_csv(rows));
    std::cout << "relabeling:";
    for (int t : report.relabeling) std::cout << " " << t;
    std::cout << "\n";
  });
}

void add_study(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "study", "The full simulation study: simulate, fit, relabel, score");
  auto settings = std::make_shared<std::vector<int>>(
      cfg_or("settings", std::vector<int>{1, 2, 3, 4}));
  auto n_totals = std::make_shared<std::vector<int>>(
      cfg_or("n_totals", std::vector<int>{600, 900, 1200, 1500}));
  auto T = std::make_shared<int>(cfg_or("T", 44));
  auto replicates = std::make_shared<int>(cfg_or("replicates", 20));
  auto methods = std::make_shared<std::vector<std::string>>(cfg_or(
      "methods", std::vector<std::string>{"pca_kmeans", "lca", "lta"}));
  auto seed = std::make_shared<std::uint64_t>(cfg_or("seed", 1));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--settings", *settings, "Settings to include")
      ->delimiter(',');
  cmd->add_option("--N", *n_totals, "Total cohort sizes")->delimiter(',');
  cmd->add_option("--T", *T, "Time points per individual");
  cmd->add_option("--replicates", *replicates, "Replicates per cell");
  cmd->add_option("--methods", *methods, "pca_kmeans,lca,lta")->delimiter(',');
  cmd->add_option("--seed", *seed, "Master seed");
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    StudyConfig cfg = StudyConfig::from_json(g_config);
    cfg.settings = *settings;
    cfg.n_totals = *n_totals;
    cfg.T = *T;
    cfg.replicates = *replicates;
    cfg.methods = *methods;
    cfg.seed = *seed;
    cfg.progress = [](const std::string& line) { std::cerr << line << "\n"; };
    const auto result = run_simulation_study(cfg);
    write_file(out_path(*out, "results.csv"), tidy_to_csv(result.rows));
    json manifest = result.manifest;
    manifest["written_at_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    write_file(out_path(*out, "manifest.json"), manifest.dump(2) + "\n");
    std::cout << "wrote " << result.rows.size() << " tidy rows to "
              << out_path(*out, "results.csv") << "\n";
  });
}

void add_ingest(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "ingest", "Clean raw id,timestamp,state EMA data into a cohort CSV");
  auto input = std::make_shared<std::string>();
  auto gap_days = std::make_shared<double>(cfg_or("gap_days", 7.0));
  auto min_obs = std::make_shared<int>(cfg_or("min_obs", 25));
  auto max_state = std::make_shared<int>(cfg_or("max_state", 5));
  auto gap_rule = std::make_shared<std::string>(
      cfg_or<std::string>("gap_rule", "truncate"));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Raw CSV (id,timestamp,state)")->required();
  cmd->add_option("--gap-days", *gap_days,
                  "Oversized-gap threshold in days (strictly greater drops)");
  cmd->add_option("--min-obs", *min_obs, "Minimum observations per individual");
  cmd->add_option("--max-state", *max_state, "Largest valid state");
  cmd->add_option("--gap-rule", *gap_rule, "truncate | drop-segments")
      ->check(CLI::IsMember({"truncate", "drop-segments"}));
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    std::ifstream in(*input);
    if (!in) throw ValidationError("cannot open: " + *input);
    IngestConfig cfg;
    cfg.gap_threshold_days = *gap_days;
    cfg.min_obs = *min_obs;
    cfg.max_state = *max_state;
    cfg.gap_rule = *gap_rule == "drop-segments" ? GapRule::kDropSegments
                                                : GapRule::kTruncate;
    const auto result = ingest_ema_csv(in, cfg);
    write_file(out_path(*out, "cohort.csv"), cohort_to_csv(result.cohort));

    std::string rejects = "line,reason,content\n";
    for (const auto& r : result.report.rejects) {
      std::string content = r.line;
      for (auto& ch : content) {
        if (ch == ',') ch = ';';
      }
      rejects += std::to_string(r.line_no) + "," + r.reason + "," + content + "\n";
    }
    write_file(out_path(*out, "rejects.csv"), rejects);

    json report;
    report["input_rows"] = result.report.input_rows;
    report["rejected_rows"] = result.report.rejects.size();
    report["input_individuals"] = result.report.input_individuals;
    report["kept"] = result.report.kept;
    report["dropped_min_obs"] = result.report.dropped_min_obs;
    report["truncated"] = result.report.truncated;
    report["observations_removed_by_gap"] =
        result.report.observations_removed_by_gap;
    write_file(out_path(*out, "filter_report.json"), report.dump(2) + "\n");
    std::cout << filter_report_summary(result.report);
  });
}

void add_analyze(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "analyze",
      "End-to-end clustering of a cohort with a per-cluster summary table");
  auto input = std::make_shared<std::string>();
  auto k = std::make_shared<int>(cfg_or("k", 3));
  auto components = std::make_shared<int>(cfg_or("components", 2));
  auto no_scale = std::make_shared<bool>(false);
  auto restarts = std::make_shared<int>(cfg_or("restarts", 25));
  auto fuzzy = std::make_shared<bool>(false);
  auto fuzzifier = std::make_shared<double>(cfg_or("fuzzifier", 2.0));
  auto silhouettes = std::make_shared<bool>(false);
  auto seed = std::make_shared<std::uint64_t>(cfg_or("seed", 1));
  auto out = std::make_shared<std::string>(cfg_or<std::string>("out", "."));
  cmd->add_option("--input", *input, "Cohort CSV")->required();
  cmd->add_option("--k", *k, "Number of clusters");
  cmd->add_option("--components", *components, "PCA components fed to K-means");
  cmd->add_flag("--no-scale", *no_scale, "Covariance instead of correlation PCA");
  cmd->add_option("--restarts", *restarts, "K-means restarts");
  cmd->add_flag("--fuzzy", *fuzzy, "Also fit fuzzy C-means memberships");
  cmd->add_option("--fuzzifier", *fuzzifier, "Fuzzy exponent m > 1");
  cmd->add_flag("--silhouettes", *silhouettes,
                "Report mean silhouette for K = 2, 3, 4");
  cmd->add_option("--seed", *seed, "Seed");
  cmd->add_option("--out", *out, "Output directory");
  cmd->callback([=]() {
    const auto cohort = load_cohort(*input);
    AnalysisOptions opts;
    opts.K = *k;
    opts.pca_components = *components;
    opts.pca_scale = !*no_scale;
    opts.kmeans_restarts = *restarts;
    opts.fuzzy = *fuzzy;
    opts.fuzzifier = *fuzzifier;
    if (*silhouettes) opts.silhouette_ks = {2, 3, 4};
    opts.seed = *seed;
    const auto result = run_analysis(cohort, opts);

    write_file(out_path(*out, "cluster_table.csv"),
               cluster_table_to_csv(result.table));
    write_file(out_path(*out, "assignments.csv"),
               assignments_to_csv(result.ids, result.assignments));
    write_file(out_path(*out, "pca.json"),
               pca_to_json(result.pca).dump(2) + "\n");
    if (result.fuzzy) {
      write_file(out_path(*out, "membership.csv"),
                 id_table_to_csv(result.ids, kn_columns("m", *k),
                                 result.fuzzy->membership));
    }
    json summary = hard_clustering_to_json(result.clustering);
    if (!result.silhouette_by_k.empty()) {
      json si = json::object();
      for (const auto& [kk, v] : result.silhouette_by_k) {
        si[std::to_string(kk)] = v;
      }
      summary["mean_silhouette_by_k"] = std::move(si);
    }
    write_file(out_path(*out, "analysis.json"), summary.dump(2) + "\n");
    std::cout << cluster_table_to_csv(result.table);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent stress-profile toolkit for longitudinal ordinal data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "latprof 0.1.0");

  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option defaults")
      ->check(CLI::ExistingFile);

  // The config must be loaded before subcommand options capture their
  // defaults, so scan for it ahead of the real parse.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (in) {
        try {
          in >> g_config;
        } catch (const std::exception& e) {
          std::cerr << "bad --config JSON: " << e.what() << "\n";
          return 2;
        }
      }
    }
  }

  add_simulate(app);
  add_features(app);
  add_pca(app);
  add_cluster(app);
  add_lca(app);
  add_lta(app);
  add_evaluate(app);
  add_study(app);
  add_ingest(app);
  add_analyze(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
