#include "latprof/lta.hpp"

#include <cmath>
#include <limits>

#include "latprof/clustering.hpp"
#include "latprof/rng.hpp"

namespace latprof {

namespace {

void check_cohort(const Cohort& cohort, int C) {
  for (const auto& seq : cohort) {
    if (seq.states.empty()) {
      throw ValidationError("LTA: sequence '" + seq.id + "' is empty");
    }
    for (int s : seq.states) {
      if (s < 1 || s > C) {
        throw ValidationError("LTA: state " + std::to_string(s) +
                              " outside 1.." + std::to_string(C) +
                              " in sequence '" + seq.id + "'");
      }
    }
  }
}

// Scaled forward pass. Returns the sequence log-likelihood; alpha rows are
// normalized and scales holds the per-step normalizers. Scalar loops: K is
// tiny and these run inside EM restarts over whole cohorts.
double forward_scaled(const LtaModel& model, const std::vector<int>& obs,
                      Eigen::MatrixXd& alpha, Eigen::VectorXd& scales) {
  const int T = static_cast<int>(obs.size());
  const int K = model.num_classes();
  alpha.resize(T, K);
  scales.resize(T);

  double s = 0.0;
  for (int k = 0; k < K; ++k) {
    alpha(0, k) = model.initial[k] * model.emissions(k, obs[0] - 1);
    s += alpha(0, k);
  }
  scales[0] = s;
  for (int k = 0; k < K; ++k) alpha(0, k) /= s;

  double loglik = std::log(s);
  for (int t = 1; t < T; ++t) {
    const int o = obs[t] - 1;
    s = 0.0;
    for (int k = 0; k < K; ++k) {
      double a = 0.0;
      for (int j = 0; j < K; ++j) {
        a += alpha(t - 1, j) * model.transitions(j, k);
      }
      a *= model.emissions(k, o);
      alpha(t, k) = a;
      s += a;
    }
    scales[t] = s;
    for (int k = 0; k < K; ++k) alpha(t, k) /= s;
    loglik += std::log(s);
  }
  return loglik;
}

void backward_scaled(const LtaModel& model, const std::vector<int>& obs,
                     const Eigen::VectorXd& scales, Eigen::MatrixXd& beta) {
  const int T = static_cast<int>(obs.size());
  const int K = model.num_classes();
  beta.resize(T, K);
  for (int k = 0; k < K; ++k) beta(T - 1, k) = 1.0;
  for (int t = T - 2; t >= 0; --t) {
    const int o = obs[t + 1] - 1;
    for (int j = 0; j < K; ++j) {
      double b = 0.0;
      for (int k = 0; k < K; ++k) {
        b += model.transitions(j, k) * model.emissions(k, o) * beta(t + 1, k);
      }
      beta(t, j) = b / scales[t + 1];
    }
  }
}

struct SufficientStats {
  Eigen::VectorXd initial;
  Eigen::MatrixXd transitions;
  Eigen::MatrixXd emissions;

  SufficientStats(int K, int C)
      : initial(Eigen::VectorXd::Zero(K)),
        transitions(Eigen::MatrixXd::Zero(K, K)),
        emissions(Eigen::MatrixXd::Zero(K, C)) {}
};

// One Baum-Welch E-step over the whole cohort; returns the log-likelihood.
double accumulate_stats(const LtaModel& model, const Cohort& cohort,
                        SufficientStats& stats) {
  const int K = model.num_classes();
  double loglik = 0.0;
  Eigen::MatrixXd alpha, beta;
  Eigen::VectorXd scales;
  for (const auto& seq : cohort) {
    const auto& obs = seq.states;
    const int T = static_cast<int>(obs.size());
    loglik += forward_scaled(model, obs, alpha, scales);
    backward_scaled(model, obs, scales, beta);

    // State posteriors: alpha and beta are scaled so gamma rows already sum 1.
    for (int t = 0; t < T; ++t) {
      const int o = obs[t] - 1;
      for (int k = 0; k < K; ++k) {
        const double gamma = alpha(t, k) * beta(t, k);
        if (t == 0) stats.initial[k] += gamma;
        stats.emissions(k, o) += gamma;
      }
    }
    // Pair posteriors.
    for (int t = 0; t + 1 < T; ++t) {
      const int o = obs[t + 1] - 1;
      const double inv_scale = 1.0 / scales[t + 1];
      for (int k = 0; k < K; ++k) {
        const double right = model.emissions(k, o) * beta(t + 1, k) * inv_scale;
        for (int j = 0; j < K; ++j) {
          stats.transitions(j, k) +=
              alpha(t, j) * model.transitions(j, k) * right;
        }
      }
    }
  }
  return loglik;
}

void m_step(const SufficientStats& stats, double smoothing, LtaModel& model) {
  const int K = model.num_classes();
  const int C = model.num_states();
  model.initial = stats.initial / stats.initial.sum();
  for (int k = 0; k < K; ++k) {
    model.transitions.row(k) =
        (stats.transitions.row(k).array() + smoothing) /
        (stats.transitions.row(k).sum() + K * smoothing);
    model.emissions.row(k) = (stats.emissions.row(k).array() + smoothing) /
                             (stats.emissions.row(k).sum() + C * smoothing);
  }
}

// Deterministic starting point in the style of latent-Markov software:
// cluster the empirical state profiles, seed the emission rows with the
// cluster centers, and start from near-identity transitions. The latent class
// is meant to be an individual-level trait here, so the start encodes "almost
// never switches" and EM refines within that mixture family instead of
// drifting into a within-individual dynamics fit.
struct StickyStart {
  bool usable = false;        // false when profiles carry no structure
  Eigen::MatrixXd emissions;  // K x C
  Eigen::VectorXd shares;     // K
};

StickyStart profile_start(const Cohort& cohort, int K, int C,
                          std::uint64_t seed) {
  StickyStart start;
  const Eigen::Index n = static_cast<Eigen::Index>(cohort.size());
  if (n < K) return start;

  Eigen::MatrixXd profiles(n, C);
  for (Eigen::Index i = 0; i < n; ++i) {
    profiles.row(i) = empirical_profile(cohort[i], C).h.transpose();
  }
  // With (near-)identical profiles there is no between-individual structure
  // to seed from; random starts handle that regime better.
  const Eigen::RowVectorXd mean = profiles.colwise().mean();
  const double spread =
      (profiles.rowwise() - mean).rowwise().squaredNorm().mean();
  if (spread < 1e-4) return start;

  const auto clusters = kmeans(profiles, K, 5, seed);
  start.usable = true;
  start.emissions.resize(K, C);
  start.shares = Eigen::VectorXd::Zero(K);
  for (int a : clusters.assignments) start.shares[a - 1] += 1.0;
  start.shares /= start.shares.sum();
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd row = clusters.centroids.row(k).transpose().cwiseMax(0.0);
    row.array() += 0.02;  // keep unvisited states reachable
    start.emissions.row(k) = (row / row.sum()).transpose();
  }
  return start;
}

}  // namespace

LtaModel fit_lta(const Cohort& cohort, int K, int C, const LtaOptions& opts,
                 std::uint64_t seed) {
  if (K < 1) throw ValidationError("fit_lta: K must be >= 1");
  if (C < 2) throw ValidationError("fit_lta: C must be >= 2");
  if (cohort.empty()) throw ValidationError("fit_lta: empty cohort");
  check_cohort(cohort, C);

  const StickyStart start = profile_start(cohort, K, C, derive_seed(seed, {17}));

  LtaModel best;
  bool have_best = false;
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));

    LtaModel model;
    model.transitions.resize(K, K);
    model.emissions.resize(K, C);
    if (start.usable) {
      // Restart 0 is the deterministic start; later restarts blend the
      // emission rows with Dirichlet noise and vary the off-diagonal
      // transition mass over 1e-4..1e-2, staying in the mixture family.
      const double mix = r == 0 ? 1.0 : 0.5 + 0.5 * rng.uniform();
      const double off_mass =
          r == 0 ? 1e-3 : std::pow(10.0, -(2.0 + 2.0 * rng.uniform()));
      for (int k = 0; k < K; ++k) {
        Eigen::VectorXd row =
            mix * start.emissions.row(k).transpose() +
            (1.0 - mix) * rng.dirichlet(C);
        model.emissions.row(k) = (row / row.sum()).transpose();
        if (K > 1) {
          Eigen::VectorXd off = rng.dirichlet(K - 1);
          int pos = 0;
          for (int j = 0; j < K; ++j) {
            model.transitions(k, j) =
                j == k ? 1.0 - off_mass : off_mass * off[pos++];
          }
        } else {
          model.transitions(0, 0) = 1.0;
        }
      }
      Eigen::VectorXd init =
          mix * start.shares + (1.0 - mix) * rng.dirichlet(K);
      model.initial = init / init.sum();
    } else {
      model.initial = rng.dirichlet(K);
      for (int k = 0; k < K; ++k) {
        model.transitions.row(k) = rng.dirichlet(K).transpose();
        model.emissions.row(k) = rng.dirichlet(C).transpose();
      }
    }

    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
      SufficientStats stats(K, C);
      model.loglik = accumulate_stats(model, cohort, stats);
      model.loglik_trace.push_back(model.loglik);
      model.n_iter = iter;
      // Relative convergence: EM improvements are judged against the scale
      // of the log-likelihood itself.
      if (iter > 1 &&
          model.loglik - prev < opts.tol * (1.0 + std::abs(model.loglik))) {
        model.converged = true;
        break;
      }
      prev = model.loglik;
      m_step(stats, opts.smoothing, model);
    }

    if (!have_best || model.loglik > best.loglik) {
      best = std::move(model);
      have_best = true;
    }
  }
  return best;
}

double lta_loglik(const LtaModel& model, const Cohort& cohort) {
  check_cohort(cohort, model.num_states());
  double loglik = 0.0;
  Eigen::MatrixXd alpha;
  Eigen::VectorXd scales;
  for (const auto& seq : cohort) {
    loglik += forward_scaled(model, seq.states, alpha, scales);
  }
  return loglik;
}

Eigen::MatrixXd lta_posteriors(const LtaModel& model,
                               const DiscreteSequence& seq) {
  Eigen::MatrixXd alpha, beta;
  Eigen::VectorXd scales;
  forward_scaled(model, seq.states, alpha, scales);
  backward_scaled(model, seq.states, scales, beta);
  return alpha.cwiseProduct(beta);
}

EmpiricalProfile empirical_profile(const DiscreteSequence& seq, int C) {
  if (seq.states.empty()) {
    throw ValidationError("empirical_profile: empty sequence");
  }
  EmpiricalProfile p;
  p.h = Eigen::VectorXd::Zero(C);
  for (int s : seq.states) {
    if (s < 1 || s > C) {
      throw ValidationError("empirical_profile: state " + std::to_string(s) +
                            " outside 1.." + std::to_string(C));
    }
    p.h[s - 1] += 1.0;
  }
  p.h /= static_cast<double>(seq.states.size());
  return p;
}

ProfileAssignment assign_by_profile(
    const Eigen::MatrixXd& emissions,
    const std::vector<EmpiricalProfile>& profiles) {
  const int K = static_cast<int>(emissions.rows());
  ProfileAssignment out;
  out.labels.reserve(profiles.size());
  out.distances.resize(static_cast<Eigen::Index>(profiles.size()), K);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    int best = 0;
    for (int k = 0; k < K; ++k) {
      const double d =
          (emissions.row(k).transpose() - profiles[i].h).norm();
      out.distances(static_cast<Eigen::Index>(i), k) = d;
      if (d < out.distances(static_cast<Eigen::Index>(i), best)) best = k;
    }
    out.labels.push_back(best + 1);
  }
  return out;
}

std::vector<int> assign_by_viterbi(const LtaModel& model,
                                   const Cohort& cohort) {
  const int K = model.num_classes();
  const Eigen::VectorXd log_init = model.initial.array().max(1e-300).log();
  const Eigen::MatrixXd log_trans =
      model.transitions.array().max(1e-300).log();
  const Eigen::MatrixXd log_emis = model.emissions.array().max(1e-300).log();

  std::vector<int> labels;
  labels.reserve(cohort.size());
  for (const auto& seq : cohort) {
    const int T = seq.length();
    Eigen::MatrixXd delta(T, K);
    Eigen::MatrixXi back(T, K);
    delta.row(0) =
        (log_init + log_emis.col(seq.states[0] - 1)).transpose();
    for (int t = 1; t < T; ++t) {
      for (int k = 0; k < K; ++k) {
        Eigen::Index arg;
        const double v =
            (delta.row(t - 1).transpose() + log_trans.col(k)).maxCoeff(&arg);
        delta(t, k) = v + log_emis(k, seq.states[t] - 1);
        back(t, k) = static_cast<int>(arg);
      }
    }
    Eigen::Index state;
    delta.row(T - 1).maxCoeff(&state);
    std::vector<int> path(T);
    path[T - 1] = static_cast<int>(state);
    for (int t = T - 1; t > 0; --t) {
      path[t - 1] = back(t, path[t]);
    }
    std::vector<int> counts(K, 0);
    for (int s : path) ++counts[s];
    int mode = 0;
    for (int k = 1; k < K; ++k) {
      if (counts[k] > counts[mode]) mode = k;
    }
    labels.push_back(mode + 1);
  }
  return labels;
}

}  // namespace latprof
