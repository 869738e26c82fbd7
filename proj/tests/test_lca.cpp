#include <doctest.h>

#include <cmath>

#include "latprof/lca.hpp"
#include "latprof/markov_sim.hpp"
#include "latprof/rng.hpp"

using namespace latprof;

namespace {

constexpr int kC = 5;

Cohort constant_class_cohort(int n_per_class) {
  Cohort cohort;
  for (int i = 0; i < n_per_class; ++i) {
    DiscreteSequence lo, hi;
    lo.id = "lo" + std::to_string(i);
    lo.states.assign(12, 1);
    lo.true_class = 1;
    hi.id = "hi" + std::to_string(i);
    hi.states.assign(12, 5);
    hi.true_class = 2;
    cohort.push_back(lo);
    cohort.push_back(hi);
  }
  return cohort;
}

}  // namespace

TEST_SUITE_BEGIN("lca");

TEST_CASE("wide conversion requires temporal uniformity") {
  Cohort cohort;
  DiscreteSequence a, b;
  a.id = "a";
  a.states = {1, 2, 3};
  b.id = "b";
  b.states = {1, 2};
  cohort = {a, b};
  CHECK_THROWS_AS(cohort_to_wide(cohort), ValidationError);

  b.states = {1, 2, 5};
  cohort = {a, b};
  const auto X = cohort_to_wide(cohort);
  CHECK(X.rows() == 2);
  CHECK(X.cols() == 3);
  CHECK(X(1, 2) == 5);
}

TEST_CASE("single-class fit recovers per-time frequencies in one iteration") {
  Eigen::MatrixXi X(6, 3);
  X << 1, 2, 2,
       1, 2, 3,
       2, 2, 3,
       1, 1, 3,
       3, 2, 2,
       1, 2, 2;
  LcaOptions opts;
  opts.restarts = 1;
  const auto model = fit_lca(X, 1, kC, opts, 4);

  CHECK(model.priors[0] == doctest::Approx(1.0).epsilon(1e-12));
  // Smoothed empirical frequencies at each time point.
  const double eps = opts.smoothing;
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(kC);
    for (int i = 0; i < 6; ++i) counts[X(i, t) - 1] += 1.0;
    for (int c = 0; c < kC; ++c) {
      const double expected = (counts[c] + eps) / (6.0 + kC * eps);
      CHECK(model.item_probs[t](0, c) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  // Log-likelihood equals the saturated independence value under the same
  // smoothed frequencies.
  double oracle = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int t = 0; t < 3; ++t) {
      oracle += std::log(model.item_probs[t](0, X(i, t) - 1));
    }
  }
  CHECK(model.loglik == doctest::Approx(oracle).epsilon(1e-12));

  // K = 1 reaches the EM fixed point after a single iteration.
  LcaOptions one_iter = opts;
  one_iter.max_iter = 1;
  const auto first = fit_lca(X, 1, kC, one_iter, 4);
  CHECK(first.loglik == model.loglik);
  for (int t = 0; t < 3; ++t) {
    CHECK((first.item_probs[t] - model.item_probs[t]).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("two deterministic constant classes separate exactly") {
  const auto cohort = constant_class_cohort(50);
  const auto X = cohort_to_wide(cohort);
  LcaOptions opts;
  opts.restarts = 4;
  const auto model = fit_lca(X, 2, kC, opts, 11);

  CHECK(model.priors[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(model.priors[1] == doctest::Approx(0.5).epsilon(1e-9));

  const auto labels = classify_lca(model);
  // Perfect recovery up to label order: all-1 rows agree, all-5 rows agree,
  // and the two groups get different labels.
  for (std::size_t i = 0; i < cohort.size(); i += 2) {
    CHECK(labels[i] == labels[0]);
    CHECK(labels[i + 1] == labels[1]);
  }
  CHECK(labels[0] != labels[1]);

  // Posteriors are essentially exact.
  for (Eigen::Index i = 0; i < model.posterior.rows(); ++i) {
    CHECK(model.posterior.row(i).maxCoeff() >= 1.0 - 1e-9);
  }
}

TEST_CASE("map classification breaks ties toward the lower class") {
  LcaModel model;
  model.priors = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  model.posterior.resize(2, 3);
  model.posterior << 0.1, 0.7, 0.2,
                     0.5, 0.5, 0.0;
  const auto labels = classify_lca(model);
  CHECK(labels[0] == 2);
  CHECK(labels[1] == 1);
}

TEST_CASE("log-likelihood trace never decreases materially") {
  const auto cohort = simulate_cohort(builtin_setting(1), {30, 30, 30}, 20,
                                      ProbVector::uniform(kC), 8);
  const auto X = cohort_to_wide(cohort);
  LcaOptions opts;
  opts.restarts = 3;
  const auto model = fit_lca(X, 3, kC, opts, 21);
  REQUIRE(model.loglik_trace.size() >= 2);
  for (std::size_t i = 1; i < model.loglik_trace.size(); ++i) {
    CHECK(model.loglik_trace[i] >= model.loglik_trace[i - 1] - 1e-8);
  }
  CHECK(model.converged);

  CHECK(std::abs(model.priors.sum() - 1.0) < 1e-10);
  for (Eigen::Index i = 0; i < model.posterior.rows(); ++i) {
    CHECK(std::abs(model.posterior.row(i).sum() - 1.0) < 1e-9);
  }
  for (const auto& item : model.item_probs) {
    for (Eigen::Index k = 0; k < item.rows(); ++k) {
      CHECK(std::abs(item.row(k).sum() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("model is label-permutation symmetric") {
  const auto cohort = simulate_cohort(builtin_setting(1), {25, 25, 25}, 15,
                                      ProbVector::uniform(kC), 14);
  const auto X = cohort_to_wide(cohort);
  LcaOptions opts;
  opts.restarts = 2;

  // K = 2: swapping the two classes reorders a two-term sum, which is exact
  // in floating point.
  const auto two = fit_lca(X, 2, kC, opts, 31);
  LcaModel swapped = two;
  std::swap(swapped.priors[0], swapped.priors[1]);
  for (auto& item : swapped.item_probs) item.row(0).swap(item.row(1));
  CHECK(lca_loglik(swapped, X) == lca_loglik(two, X));

  // K = 3: permutations agree to rounding.
  const auto three = fit_lca(X, 3, kC, opts, 31);
  LcaModel rotated = three;
  const Eigen::VectorXd p = rotated.priors;
  rotated.priors << p[2], p[0], p[1];
  for (auto& item : rotated.item_probs) {
    const Eigen::MatrixXd orig = item;
    item.row(0) = orig.row(2);
    item.row(1) = orig.row(0);
    item.row(2) = orig.row(1);
  }
  CHECK(lca_loglik(rotated, X) ==
        doctest::Approx(lca_loglik(three, X)).epsilon(1e-12));
}

TEST_CASE("input validation") {
  Eigen::MatrixXi X(2, 2);
  X << 1, 2, 3, 6;
  LcaOptions opts;
  CHECK_THROWS_AS(fit_lca(X, 2, kC, opts, 1), ValidationError);  // state 6
  X << 1, 2, 3, 4;
  CHECK_THROWS_AS(fit_lca(X, 0, kC, opts, 1), ValidationError);
}

TEST_SUITE_END();
