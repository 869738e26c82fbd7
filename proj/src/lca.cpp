#include "latprof/lca.hpp"

#include <cmath>
#include <limits>

#include "latprof/rng.hpp"

namespace latprof {

namespace {

double logsumexp_row(const Eigen::RowVectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf
  return m + std::log((v.array() - m).exp().sum());
}

void check_states(const Eigen::MatrixXi& X, int C) {
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index t = 0; t < X.cols(); ++t) {
      if (X(i, t) < 1 || X(i, t) > C) {
        throw ValidationError("LCA: state " + std::to_string(X(i, t)) +
                              " outside 1.." + std::to_string(C));
      }
    }
  }
}

// E-step: fills the posterior and returns the data log-likelihood.
double e_step(const Eigen::MatrixXi& X, const Eigen::VectorXd& priors,
              const std::vector<Eigen::MatrixXd>& item_probs,
              Eigen::MatrixXd& posterior) {
  const Eigen::Index n = X.rows();
  const Eigen::Index T = X.cols();
  const int K = static_cast<int>(priors.size());

  Eigen::VectorXd log_priors(K);
  for (int k = 0; k < K; ++k) {
    log_priors[k] = priors[k] > 0.0 ? std::log(priors[k])
                                    : -std::numeric_limits<double>::infinity();
  }
  std::vector<Eigen::MatrixXd> log_items(T);
  for (Eigen::Index t = 0; t < T; ++t) {
    log_items[t] = item_probs[t].array().log();
  }

  double loglik = 0.0;
  Eigen::RowVectorXd lp(K);
  for (Eigen::Index i = 0; i < n; ++i) {
    lp = log_priors.transpose();
    for (Eigen::Index t = 0; t < T; ++t) {
      lp += log_items[t].col(X(i, t) - 1).transpose();
    }
    const double lse = logsumexp_row(lp);
    loglik += lse;
    posterior.row(i) = (lp.array() - lse).exp();
  }
  return loglik;
}

// M-step: closed-form frequency updates, smoothed on the item probabilities.
void m_step(const Eigen::MatrixXi& X, const Eigen::MatrixXd& posterior, int C,
            double smoothing, Eigen::VectorXd& priors,
            std::vector<Eigen::MatrixXd>& item_probs) {
  const Eigen::Index n = X.rows();
  const Eigen::Index T = X.cols();
  const int K = static_cast<int>(posterior.cols());

  priors = posterior.colwise().mean();

  const Eigen::VectorXd class_mass = posterior.colwise().sum();
  for (Eigen::Index t = 0; t < T; ++t) {
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(K, C);
    for (Eigen::Index i = 0; i < n; ++i) {
      counts.col(X(i, t) - 1) += posterior.row(i).transpose();
    }
    for (int k = 0; k < K; ++k) {
      item_probs[t].row(k) =
          (counts.row(k).array() + smoothing) / (class_mass[k] + C * smoothing);
    }
  }
}

}  // namespace

Eigen::MatrixXi cohort_to_wide(const Cohort& cohort) {
  if (cohort.empty()) {
    throw ValidationError("cohort_to_wide: empty cohort");
  }
  const int T = cohort.front().length();
  for (const auto& seq : cohort) {
    if (seq.length() != T) {
      throw ValidationError(
          "cohort_to_wide: sequence '" + seq.id + "' has " +
          std::to_string(seq.length()) + " observations, expected " +
          std::to_string(T) +
          "; per-time-point LCA cannot handle varying sequence lengths");
    }
  }
  Eigen::MatrixXi X(cohort.size(), T);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    for (int t = 0; t < T; ++t) X(static_cast<Eigen::Index>(i), t) = cohort[i].states[t];
  }
  return X;
}

LcaModel fit_lca(const Eigen::MatrixXi& X, int K, int C, const LcaOptions& opts,
                 std::uint64_t seed) {
  if (K < 1) throw ValidationError("fit_lca: K must be >= 1");
  if (C < 2) throw ValidationError("fit_lca: C must be >= 2");
  if (X.rows() < 1 || X.cols() < 1) {
    throw ValidationError("fit_lca: empty data matrix");
  }
  check_states(X, C);

  const Eigen::Index n = X.rows();
  const Eigen::Index T = X.cols();

  LcaModel best;
  bool have_best = false;
  for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));

    LcaModel model;
    model.posterior.resize(n, K);
    for (Eigen::Index i = 0; i < n; ++i) {
      model.posterior.row(i) = rng.dirichlet(K).transpose();
    }
    model.item_probs.assign(T, Eigen::MatrixXd(K, C));

    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
      m_step(X, model.posterior, C, opts.smoothing, model.priors,
             model.item_probs);
      model.loglik = e_step(X, model.priors, model.item_probs, model.posterior);
      model.loglik_trace.push_back(model.loglik);
      model.n_iter = iter;
      if (model.loglik - prev < opts.tol && iter > 1) {
        model.converged = true;
        break;
      }
      prev = model.loglik;
    }

    if (!have_best || model.loglik > best.loglik) {
      best = std::move(model);
      have_best = true;
    }
  }
  return best;
}

double lca_loglik(const LcaModel& model, const Eigen::MatrixXi& X) {
  Eigen::MatrixXd posterior(X.rows(), model.num_classes());
  return e_step(X, model.priors, model.item_probs, posterior);
}

std::vector<int> classify_lca(const LcaModel& model) {
  std::vector<int> labels;
  labels.reserve(model.posterior.rows());
  for (Eigen::Index i = 0; i < model.posterior.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < model.posterior.cols(); ++k) {
      if (model.posterior(i, k) > model.posterior(i, best)) best = k;
    }
    labels.push_back(best + 1);
  }
  return labels;
}

}  // namespace latprof
