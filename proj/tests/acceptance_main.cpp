// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 7 runs the desk-scale recovery study and takes a few
// minutes; everything else is fast.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "latprof/clustering.hpp"
#include "latprof/eval.hpp"
#include "latprof/features.hpp"
#include "latprof/ingest.hpp"
#include "latprof/io.hpp"
#include "latprof/lca.hpp"
#include "latprof/lta.hpp"
#include "latprof/markov_sim.hpp"
#include "latprof/pca.hpp"
#include "latprof/rng.hpp"
#include "latprof/study.hpp"

using namespace latprof;

namespace {

int g_failures = 0;
std::string g_data_dir;

void report(int number, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::printf("criterion %2d (%s): %s%s%s\n", number, name.c_str(),
              pass ? "PASS" : "FAIL", detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- 1. LOCF oracle -------------------------------------------------------
void criterion_locf() {
  ContinuousTrajectory traj;
  traj.horizon = 9.0;
  traj.events = {{0.0, 1},       {0.8009673, 4}, {1.9858932, 2},
                 {4.3168586, 3}, {5.1538039, 1}, {7.1767493, 5},
                 {8.9486051, 1}};
  const auto t0 = std::chrono::steady_clock::now();
  const auto seq = discretize_locf(traj, 9);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  const std::vector<int> expected = {1, 4, 2, 2, 2, 3, 1, 1, 5, 1};
  report(1, "LOCF oracle", seq.states == expected && ms < 1.0,
         "took " + std::to_string(ms) + " ms");
}

// ---- 2. Setting fidelity --------------------------------------------------
void criterion_settings() {
  std::ifstream in(g_data_dir + "/table1_golden.json");
  if (!in) {
    report(2, "setting fidelity", false, "golden file missing");
    return;
  }
  nlohmann::json golden;
  in >> golden;

  bool ok = true;
  std::string detail;
  for (int s = 1; s <= 4 && ok; ++s) {
    const auto setting = builtin_setting(s);
    const auto& entry = golden.at(setting.name);
    const char* keys[3] = {"L1", "L2", "L3"};
    for (int k = 0; k < 3 && ok; ++k) {
      const auto& mat = entry.at(keys[k]);
      for (int r = 0; r < 5 && ok; ++r) {
        for (int c = 0; c < 5 && ok; ++c) {
          const double expected = mat[r][c].get<double>();
          if (setting.matrices[k].probs(r, c) != expected) {
            ok = false;
            detail = setting.name + std::string("/") + keys[k] + " (" +
                     std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
          }
        }
      }
    }
  }
  report(2, "setting fidelity", ok, detail);
}

// ---- 3. Transition-estimation consistency ---------------------------------
void criterion_transition_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto setting = builtin_setting(1);
  // One 100,000-step embedded-chain path from the second class generator.
  const auto traj = simulate_trajectory(setting.matrices[1],
                                        ProbVector::uniform(5), 1.02e5, 8101);
  auto states = event_state_sequence(traj);
  bool ok = states.size() >= 100001;
  std::string detail;
  if (ok) {
    states.resize(100001);  // exactly 100,000 transitions
    DiscreteSequence path;
    path.id = "chain";
    path.states = std::move(states);
    const auto est = estimate_transition_matrix({path}, 5);
    const double err =
        (est.jump.probs - setting.matrices[1].probs).cwiseAbs().maxCoeff();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    ok = err <= 0.02 && secs < 5.0;
    detail = "max abs error " + std::to_string(err) + ", " +
             std::to_string(secs) + " s";
  } else {
    detail = "simulated path too short";
  }
  report(3, "transition estimation within 0.02", ok, detail);
}

// ---- 4. EM monotonicity ----------------------------------------------------
void criterion_em_monotonicity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cohort = simulate_cohort(builtin_setting(3), {100, 100, 100}, 44,
                                      ProbVector::uniform(5), 3003);
  const auto wide = cohort_to_wide(cohort);

  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t restart = 0; restart < 10; ++restart) {
    LcaOptions lca_opts;
    lca_opts.restarts = 1;
    const auto lca = fit_lca(wide, 3, 5, lca_opts, 4000 + restart);
    for (std::size_t i = 1; i < lca.loglik_trace.size(); ++i) {
      const double drop = lca.loglik_trace[i - 1] - lca.loglik_trace[i];
      worst = std::max(worst, drop);
      if (drop > 1e-8) ok = false;
    }
    LtaOptions lta_opts;
    lta_opts.restarts = 1;
    const auto lta = fit_lta(cohort, 3, 5, lta_opts, 5000 + restart);
    for (std::size_t i = 1; i < lta.loglik_trace.size(); ++i) {
      const double drop = lta.loglik_trace[i - 1] - lta.loglik_trace[i];
      worst = std::max(worst, drop);
      if (drop > 1e-8) ok = false;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ok = ok && secs < 120.0;
  report(4, "EM log-likelihood monotone over 10 restarts", ok,
         "worst drop " + std::to_string(worst) + ", " + std::to_string(secs) +
             " s");
}

// ---- 5. Metric identities ---------------------------------------------------
void criterion_metric_identities() {
  const auto report5 =
      classification_report({1, 1, 2, 2}, {1, 2, 2, 2}, {1, 2});
  const auto& c1 = report5.per_class[0];
  const auto& c2 = report5.per_class[1];
  bool ok = c1.precision == 1.0 && c1.recall == 0.5 && c1.accuracy == 0.75 &&
            c1.size_ratio == 0.5 && c2.precision == 2.0 / 3.0 &&
            c2.recall == 1.0 && c2.accuracy == 0.75 && c2.size_ratio == 1.5;

  const std::vector<int> z = {1, 2, 3, 1, 2, 3};
  const auto perfect = classification_report(z, z, {1, 2, 3});
  for (const auto& m : perfect.per_class) {
    ok = ok && m.precision == 1.0 && m.recall == 1.0 && m.accuracy == 1.0 &&
         m.size_ratio == 1.0;
  }
  report(5, "classification metric identities", ok);
}

// ---- 6. Relabeling ----------------------------------------------------------
void criterion_relabeling() {
  const auto truth = builtin_setting(1).matrices;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  bool ok = true;
  for (const auto& p : perms) {
    const std::vector<JumpMatrix> est = {truth[p[0]], truth[p[1]], truth[p[2]]};
    const auto tau = relabel(est, truth);
    for (int l = 0; l < 3; ++l) {
      if (tau[l] != p[l] + 1) ok = false;
    }
  }
  report(6, "relabeling recovers all 6 permutations", ok);
}

// ---- 7. Desk-scale qualitative reproduction ---------------------------------
void criterion_study() {
  std::printf("running the desk-scale recovery study (4 settings x 20 "
              "replicates x 3 methods, N=600, T=44)...\n");
  std::fflush(stdout);
  const auto t0 = std::chrono::steady_clock::now();

  StudyConfig cfg;
  cfg.settings = {1, 2, 3, 4};
  cfg.n_totals = {600};
  cfg.T = 44;
  cfg.replicates = 20;
  cfg.methods = {"pca_kmeans", "lca", "lta"};
  cfg.seed = 20240604;
  const auto result = run_simulation_study(cfg);

  // medians[setting][method][class][metric] over replicates
  std::map<std::string,
           std::map<std::string, std::map<int, std::map<std::string,
                                                        std::vector<double>>>>>
      samples;
  int failed_rows = 0;
  for (const auto& row : result.rows) {
    if (row.status != "ok") {
      ++failed_rows;
      continue;
    }
    samples[row.setting][row.method][row.class_id][row.metric].push_back(
        row.value);
  }
  auto med = [&](const std::string& setting, const std::string& method,
                 int cls, const std::string& metric) {
    return median(samples[setting][method][cls][metric]);
  };

  // (a) Settings 1 and 3: every method reaches median accuracy >= 0.8 in
  // every class.
  bool a_ok = true;
  std::string a_detail;
  for (const std::string setting : {"Setting1", "Setting3"}) {
    for (const std::string method : {"pca_kmeans", "lca", "lta"}) {
      for (int cls = 1; cls <= 3; ++cls) {
        const double m = med(setting, method, cls, "accuracy");
        if (!(m >= 0.8)) {
          a_ok = false;
          a_detail += " " + setting + "/" + method + "/class" +
                      std::to_string(cls) + "=" + std::to_string(m);
        }
      }
    }
  }
  report(7, "recovery study (a): settings 1,3 median accuracy >= 0.8", a_ok, a_detail);

  // (b) Setting 2: PCA and LTA median recall exceed LCA's class-1 median
  // recall in every class.
  const double lca_recall_1 = med("Setting2", "lca", 1, "recall");
  bool b_ok = true;
  std::string b_detail = "lca class-1 recall " + std::to_string(lca_recall_1);
  for (const std::string method : {"pca_kmeans", "lta"}) {
    for (int cls = 1; cls <= 3; ++cls) {
      const double m = med("Setting2", method, cls, "recall");
      if (!(m > lca_recall_1)) {
        b_ok = false;
        b_detail += " " + method + "/class" + std::to_string(cls) + "=" +
                    std::to_string(m);
      }
    }
  }
  report(7, "recovery study (b): setting 2 recall ordering", b_ok, b_detail);

  // (c) Setting 4: PCA median accuracy >= LTA median accuracy per class.
  bool c_ok = true;
  std::string c_detail;
  for (int cls = 1; cls <= 3; ++cls) {
    const double pca_acc = med("Setting4", "pca_kmeans", cls, "accuracy");
    const double lta_acc = med("Setting4", "lta", cls, "accuracy");
    if (!(pca_acc >= lta_acc)) {
      c_ok = false;
    }
    c_detail += " class" + std::to_string(cls) + ": pca " +
                std::to_string(pca_acc) + " vs lta " + std::to_string(lta_acc);
  }
  const double mins = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count() /
                      60.0;
  c_detail += " | " + std::to_string(mins) + " min, " +
              std::to_string(failed_rows) + " failed rows";
  report(7, "recovery study (c): setting 4 pca >= lta accuracy", c_ok && mins < 15.0,
         c_detail);
}

// ---- 8. Clustering invariants -----------------------------------------------
void criterion_clustering_invariants() {
  bool ok = true;
  std::string detail;

  // Fuzzy membership rows on the simplex for 1,000 random points.
  Rng rng(606);
  int rows_checked = 0;
  for (int batch = 0; batch < 10; ++batch) {
    Eigen::MatrixXd pts(100, 3);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (Eigen::Index j = 0; j < pts.cols(); ++j) {
        pts(i, j) = rng.uniform() * 20.0 - 10.0;
      }
    }
    const auto soft = fuzzy_cmeans(pts, 4, 2.0, 1e-6, 200, 700 + batch);
    for (Eigen::Index i = 0; i < soft.membership.rows(); ++i, ++rows_checked) {
      if (std::abs(soft.membership.row(i).sum() - 1.0) > 1e-9 ||
          soft.membership.row(i).minCoeff() < 0.0) {
        ok = false;
        detail = "simplex violation in batch " + std::to_string(batch);
      }
    }
    const auto hard = kmeans(pts, 4, 3, 800 + batch);
    for (std::size_t s = 1; s < hard.inertia_trace.size(); ++s) {
      if (hard.inertia_trace[s] > hard.inertia_trace[s - 1] + 1e-9) {
        ok = false;
        detail = "inertia increased in batch " + std::to_string(batch);
      }
    }
  }
  if (rows_checked < 1000) {
    ok = false;
    detail = "only checked " + std::to_string(rows_checked) + " rows";
  }

  // Silhouette of two tight blobs separated by 100x their radius.
  const double radius = 0.5;
  Eigen::MatrixXd blobs(40, 2);
  for (int i = 0; i < 20; ++i) {
    blobs(i, 0) = radius * (2.0 * rng.uniform() - 1.0);
    blobs(i, 1) = radius * (2.0 * rng.uniform() - 1.0);
    blobs(20 + i, 0) = 100.0 * radius + radius * (2.0 * rng.uniform() - 1.0);
    blobs(20 + i, 1) = radius * (2.0 * rng.uniform() - 1.0);
  }
  const auto hard = kmeans(blobs, 2, 5, 31);
  const double si = silhouette(blobs, hard.assignments).mean;
  if (si < 0.95) {
    ok = false;
    detail += " blob silhouette " + std::to_string(si);
  }
  report(8, "clustering invariants", ok, detail);
}

// ---- 9. PCA invariants -------------------------------------------------------
void criterion_pca_invariants() {
  bool ok = true;
  std::string detail;
  Rng rng(909);

  for (int trial = 0; trial < 20 && ok; ++trial) {
    const int n = 12 + 3 * trial;
    Eigen::MatrixXd data(n, 7);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      for (Eigen::Index j = 0; j < data.cols(); ++j) {
        data(i, j) = rng.uniform() * (1.0 + j);
      }
    }
    FeatureMatrix fm;
    fm.values.resize(n, FeatureMatrix::kNumColumns);
    fm.values.col(0).setOnes();
    fm.values.rightCols(7) = data;
    for (int i = 0; i < n; ++i) {
      fm.ids.push_back(std::to_string(i));
      fm.n_obs.push_back(5);
    }

    const auto model = fit_pca(fm, trial % 2 == 0);
    const Eigen::Index p = model.loadings.cols();
    const double ortho =
        (model.loadings.transpose() * model.loadings -
         Eigen::MatrixXd::Identity(p, p))
            .cwiseAbs()
            .maxCoeff();
    if (ortho > 1e-8) {
      ok = false;
      detail = "orthonormality " + std::to_string(ortho);
    }
    if (std::abs(model.variance_explained.sum() - 1.0) > 1e-10) {
      ok = false;
      detail = "fractions sum";
    }
    const Eigen::MatrixXd recon = model.scores * model.loadings.transpose();
    for (std::size_t j = 0; j < model.retained_cols.size(); ++j) {
      const Eigen::VectorXd rebuilt =
          recon.col(j) * model.scale[j] +
          Eigen::VectorXd::Constant(n, model.center[j]);
      if ((rebuilt - fm.values.col(model.retained_cols[j]))
              .cwiseAbs()
              .maxCoeff() > 1e-6) {
        ok = false;
        detail = "reconstruction";
      }
    }
  }

  // Rank-2 input: exactly two nonzero components.
  Eigen::MatrixXd base(15, 2);
  for (Eigen::Index i = 0; i < base.rows(); ++i) {
    base(i, 0) = rng.uniform();
    base(i, 1) = rng.uniform();
  }
  Eigen::MatrixXd rank2(15, 7);
  for (int j = 0; j < 7; ++j) {
    rank2.col(j) = (j % 2 == 0 ? 1.0 : 0.5) * base.col(0) +
                   (0.25 * j) * base.col(1);
  }
  FeatureMatrix fm2;
  fm2.values.resize(15, FeatureMatrix::kNumColumns);
  fm2.values.col(0).setOnes();
  fm2.values.rightCols(7) = rank2;
  for (int i = 0; i < 15; ++i) {
    fm2.ids.push_back(std::to_string(i));
    fm2.n_obs.push_back(5);
  }
  const auto model2 = fit_pca(fm2, true);
  if (model2.rank() != 2) {
    ok = false;
    detail = "rank-2 input gave rank " + std::to_string(model2.rank());
  }
  report(9, "pca invariants", ok, detail);
}

// ---- 10. Ingestion rules -----------------------------------------------------
void criterion_ingestion() {
  bool ok = true;
  std::string detail;

  // 7-day truncation: gaps of 1,2,2,10 days keep the 4-observation prefix;
  // exactly 7 days is not an oversized gap.
  {
    std::istringstream in(
        "id,timestamp,state\n"
        "p,0,1\np,1,2\np,3,3\np,5,2\np,15,4\n"
        "q,0,1\nq,7,2\nq,14,3\n");
    IngestConfig cfg;
    cfg.min_obs = 3;
    const auto result = ingest_ema_csv(in, cfg);
    if (result.cohort.size() != 2 ||
        result.cohort[0].states != std::vector<int>{1, 2, 3, 2} ||
        result.cohort[1].states != std::vector<int>{1, 2, 3}) {
      ok = false;
      detail = "truncation rule";
    }
  }

  // 25-observation floor: 24 observations drop, 25 stay.
  {
    std::ostringstream data;
    data << "id,timestamp,state\n";
    for (int t = 0; t < 24; ++t) data << "short," << 0.25 * t << ",1\n";
    for (int t = 0; t < 25; ++t) data << "keep," << 0.25 * t << ",2\n";
    std::istringstream in(data.str());
    const auto result = ingest_ema_csv(in, IngestConfig{});
    if (result.cohort.size() != 1 || result.cohort[0].id != "keep" ||
        result.report.dropped_min_obs != 1 || result.report.kept != 1) {
      ok = false;
      detail += " min-obs floor";
    }
    if (result.report.input_individuals !=
        result.report.kept + result.report.dropped_min_obs) {
      ok = false;
      detail += " reconciliation";
    }
  }

  // Truncation interacts with the floor: 30 observations, oversized gap
  // after the 26th -> kept with 26; gap after the 24th -> dropped.
  {
    std::ostringstream data;
    data << "id,timestamp,state\n";
    for (int t = 0; t < 26; ++t) data << "a," << t << ",3\n";
    for (int t = 0; t < 4; ++t) data << "a," << 40 + t << ",3\n";
    for (int t = 0; t < 24; ++t) data << "b," << t << ",3\n";
    for (int t = 0; t < 6; ++t) data << "b," << 40 + t << ",3\n";
    std::istringstream in(data.str());
    const auto result = ingest_ema_csv(in, IngestConfig{});
    if (result.cohort.size() != 1 || result.cohort[0].id != "a" ||
        result.cohort[0].length() != 26 || result.report.truncated != 2 ||
        result.report.dropped_min_obs != 1 ||
        result.report.observations_removed_by_gap != 10) {
      ok = false;
      detail += " gap+floor interaction";
    }
  }
  report(10, "ingestion rules", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  g_data_dir = argc > 1 ? argv[1] : "tests/data";

  criterion_locf();
  criterion_settings();
  criterion_transition_consistency();
  criterion_em_monotonicity();
  criterion_metric_identities();
  criterion_relabeling();
  criterion_study();
  criterion_clustering_invariants();
  criterion_pca_invariants();
  criterion_ingestion();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion check(s) FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
