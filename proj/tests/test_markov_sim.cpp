#include <doctest.h>

#include <cmath>
#include <map>

#include "latprof/markov_sim.hpp"
#include "latprof/rng.hpp"

using namespace latprof;

namespace {

// Independent LOCF replay: walk the grid, remembering the last event state at
// or before each ceiling bucket (later events in a bucket overwrite).
std::vector<int> locf_replay(const ContinuousTrajectory& traj, int T) {
  std::vector<int> out;
  int current = traj.events.front().state;
  for (int t = 0; t <= T; ++t) {
    for (const auto& ev : traj.events) {
      if (static_cast<int>(std::ceil(ev.time)) == t) current = ev.state;
    }
    out.push_back(current);
  }
  return out;
}

ContinuousTrajectory table_example_trajectory() {
  ContinuousTrajectory traj;
  traj.horizon = 9.0;
  traj.events = {{0.0, 1},       {0.8009673, 4}, {1.9858932, 2},
                 {4.3168586, 3}, {5.1538039, 1}, {7.1767493, 5},
                 {8.9486051, 1}};
  return traj;
}

}  // namespace

TEST_SUITE_BEGIN("markov_sim");

TEST_CASE("builtin settings validate and carry the expected structure") {
  for (int s = 1; s <= 4; ++s) {
    const auto setting = builtin_setting(s);
    REQUIRE(setting.matrices.size() == 3);
    for (const auto& m : setting.matrices) {
      CHECK(m.size == 5);
      CHECK_NOTHROW(m.validate());
    }
  }
  CHECK_THROWS_AS(builtin_setting(0), ValidationError);
  CHECK_THROWS_AS(builtin_setting(5), ValidationError);

  // First class of the first setting is the uniform off-diagonal matrix.
  const auto s1 = builtin_setting(1);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      CHECK(s1.matrices[0].probs(r, c) == (r == c ? 0.0 : 0.25));
    }
  }

  // First class of the second setting is the 5-cycle permutation matrix.
  const auto s2 = builtin_setting(2);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const double expected = (c == (r + 1) % 5) ? 1.0 : 0.0;
      CHECK(s2.matrices[0].probs(r, c) == expected);
    }
  }
}

TEST_CASE("jump matrix validation rejects broken inputs") {
  JumpMatrix j;
  j.size = 2;
  j.probs.resize(2, 2);
  j.probs << 0, 1, 1, 0;
  CHECK_NOTHROW(j.validate());

  j.probs(0, 0) = 0.1;
  j.probs(0, 1) = 0.9;
  CHECK_THROWS_AS(j.validate(), ValidationError);  // nonzero diagonal

  j.probs << 0, 0.5, 1, 0;
  CHECK_THROWS_AS(j.validate(), ValidationError);  // row sum != 1

  ProbVector p;
  p.weights.resize(2);
  p.weights << 0.5, 0.6;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.weights << -0.1, 1.1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("locf discretization reproduces the worked single-individual table") {
  const auto seq = discretize_locf(table_example_trajectory(), 9);
  const std::vector<int> expected = {1, 4, 2, 2, 2, 3, 1, 1, 5, 1};
  CHECK(seq.states == expected);
  CHECK(seq.t_start == 0);
}

TEST_CASE("locf constant carry-forward from a single event") {
  ContinuousTrajectory traj;
  traj.horizon = 5.0;
  traj.events = {{0.0, 3}};
  const auto seq = discretize_locf(traj, 5);
  CHECK(seq.states == std::vector<int>{3, 3, 3, 3, 3, 3});
}

TEST_CASE("locf keeps the last event within a ceiling bucket") {
  ContinuousTrajectory traj;
  traj.horizon = 3.0;
  traj.events = {{0.0, 1}, {0.1, 2}, {0.9, 5}};
  const auto seq = discretize_locf(traj, 3);
  CHECK(seq.states == std::vector<int>{1, 5, 5, 5});
}

TEST_CASE("locf preconditions") {
  ContinuousTrajectory traj;
  traj.horizon = 1.0;
  CHECK_THROWS_AS(discretize_locf(traj, 3), ValidationError);
  traj.events = {{0.0, 1}};
  CHECK_THROWS_AS(discretize_locf(traj, 0), ValidationError);
}

TEST_CASE("locf matches an independent replay on random trajectories") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto setting = builtin_setting(1 + static_cast<int>(seed % 4));
    const auto traj = simulate_trajectory(setting.matrices[seed % 3],
                                          ProbVector::uniform(5), 20.0, seed);
    const auto seq = discretize_locf(traj, 20);
    REQUIRE(seq.states.size() == 21);
    CHECK(seq.states == locf_replay(traj, 20));
  }
}

TEST_CASE("cyclic generator produces the deterministic state cycle") {
  const auto setting = builtin_setting(2);
  const auto traj = simulate_trajectory(setting.matrices[0],
                                        ProbVector::point_mass(5, 1), 50.0, 7);
  const auto states = event_state_sequence(traj);
  REQUIRE(states.size() > 10);
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(states[i] == static_cast<int>(i % 5) + 1);
  }
}

TEST_CASE("horizon shorter than the first sojourn leaves only the initial event") {
  const auto setting = builtin_setting(1);
  const auto traj = simulate_trajectory(setting.matrices[0],
                                        ProbVector::uniform(5), 1e-12, 3);
  CHECK(traj.events.size() == 1);
  CHECK(traj.events.front().time == 0.0);
}

TEST_CASE("trajectory simulation validates its inputs") {
  const auto setting = builtin_setting(1);
  const auto init = ProbVector::uniform(5);

  JumpMatrix broken = setting.matrices[0];
  broken.probs(0, 0) = 0.25;
  broken.probs(0, 1) = 0.0;
  CHECK_THROWS_AS(simulate_trajectory(broken, init, 10.0, 1), ValidationError);

  ProbVector bad;
  bad.weights = Eigen::VectorXd::Constant(5, 0.3);
  CHECK_THROWS_AS(simulate_trajectory(setting.matrices[0], bad, 10.0, 1),
                  ValidationError);
  CHECK_THROWS_AS(
      simulate_trajectory(setting.matrices[0], ProbVector::uniform(4), 10.0, 1),
      ValidationError);
  CHECK_THROWS_AS(simulate_trajectory(setting.matrices[0], init, 0.0, 1),
                  ValidationError);
  CHECK_THROWS_AS(simulate_trajectory(setting.matrices[0], init, 10.0, 1, -1.0),
                  ValidationError);
}

TEST_CASE("constant sojourn law jumps at unit times") {
  const auto setting = builtin_setting(1);
  const auto traj =
      simulate_trajectory(setting.matrices[0], ProbVector::uniform(5), 5.5, 11,
                          1.0, SojournLaw::kConstant);
  REQUIRE(traj.events.size() == 6);
  for (std::size_t i = 0; i < traj.events.size(); ++i) {
    CHECK(traj.events[i].time == doctest::Approx(static_cast<double>(i)));
  }
}

TEST_CASE("trajectory invariants: strictly increasing times, no self-jumps") {
  const auto setting = builtin_setting(3);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto traj = simulate_trajectory(setting.matrices[seed % 3],
                                          ProbVector::uniform(5), 60.0, seed);
    CHECK(traj.events.front().time == 0.0);
    for (std::size_t i = 1; i < traj.events.size(); ++i) {
      CHECK(traj.events[i].time > traj.events[i - 1].time);
      CHECK(traj.events[i].state != traj.events[i - 1].state);
    }
  }
}

TEST_CASE("empirical next-state frequencies from state 2 match the generator") {
  // ~100k jumps from the second matrix of the first setting; row 2 is
  // (0.7, 0, 0.1, 0.1, 0.1).
  const auto setting = builtin_setting(1);
  const auto traj = simulate_trajectory(setting.matrices[1],
                                        ProbVector::uniform(5), 1e5, 20240517);
  const auto states = event_state_sequence(traj);
  REQUIRE(states.size() > 90000);

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(5);
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    if (states[i] == 2) counts[states[i + 1] - 1] += 1.0;
  }
  const Eigen::VectorXd freq = counts / counts.sum();
  const Eigen::VectorXd expected = setting.matrices[1].probs.row(1).transpose();
  for (int c = 0; c < 5; ++c) {
    CHECK(std::abs(freq[c] - expected[c]) < 0.01);
  }
}

TEST_CASE("long-run jump frequencies match every row within 3 standard errors") {
  const auto setting = builtin_setting(4);
  for (int cls = 0; cls < 3; ++cls) {
    const auto traj = simulate_trajectory(setting.matrices[cls],
                                          ProbVector::uniform(5), 6e4,
                                          900 + cls);
    const auto states = event_state_sequence(traj);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(5, 5);
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
      counts(states[i] - 1, states[i + 1] - 1) += 1.0;
    }
    for (int r = 0; r < 5; ++r) {
      const double n = counts.row(r).sum();
      REQUIRE(n > 100);
      for (int c = 0; c < 5; ++c) {
        const double p = setting.matrices[cls].probs(r, c);
        const double se = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(counts(r, c) / n - p) <= 3.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("cohort simulation: shape, labels, determinism") {
  const auto setting = builtin_setting(1);
  const auto init = ProbVector::uniform(5);
  const auto cohort = simulate_cohort(setting, {200, 200, 200}, 44, init, 5);
  REQUIRE(cohort.size() == 600);
  std::map<int, int> class_counts;
  for (const auto& seq : cohort) {
    CHECK(seq.length() == 45);
    REQUIRE(seq.true_class.has_value());
    class_counts[*seq.true_class] += 1;
  }
  CHECK(class_counts[1] == 200);
  CHECK(class_counts[2] == 200);
  CHECK(class_counts[3] == 200);

  const auto again = simulate_cohort(setting, {200, 200, 200}, 44, init, 5);
  REQUIRE(again.size() == cohort.size());
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    CHECK(again[i].states == cohort[i].states);
    CHECK(again[i].id == cohort[i].id);
  }

  const auto other = simulate_cohort(setting, {200, 200, 200}, 44, init, 6);
  bool any_diff = false;
  for (std::size_t i = 0; i < cohort.size() && !any_diff; ++i) {
    any_diff = other[i].states != cohort[i].states;
  }
  CHECK(any_diff);
}

TEST_CASE("cohort simulation rejects zero class sizes and size mismatches") {
  const auto setting = builtin_setting(1);
  const auto init = ProbVector::uniform(5);
  CHECK_THROWS_AS(simulate_cohort(setting, {1, 0, 1}, 10, init, 1),
                  ValidationError);
  CHECK_THROWS_AS(simulate_cohort(setting, {5, 5}, 10, init, 1),
                  ValidationError);
}

TEST_SUITE_END();
