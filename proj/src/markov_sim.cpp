#include "latprof/markov_sim.hpp"

#include <cmath>

#include "latprof/rng.hpp"

namespace latprof {

namespace {

JumpMatrix make_jump(std::initializer_list<double> entries) {
  JumpMatrix j;
  j.size = 5;
  j.probs.resize(5, 5);
  auto it = entries.begin();
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) j.probs(r, c) = *it++;
  }
  j.validate();
  return j;
}

// Uniform off-diagonal matrix 0.25(1 - I): Setting 1's first class.
JumpMatrix uniform_offdiag() {
  JumpMatrix j;
  j.size = 5;
  j.probs = 0.25 * (Eigen::MatrixXd::Ones(5, 5) - Eigen::MatrixXd::Identity(5, 5));
  j.validate();
  return j;
}

// Deterministic 5-cycle 1->2->3->4->5->1: Setting 2's first class.
JumpMatrix cycle_matrix() {
  return make_jump({0, 1, 0, 0, 0,
                    0, 0, 1, 0, 0,
                    0, 0, 0, 1, 0,
                    0, 0, 0, 0, 1,
                    1, 0, 0, 0, 0});
}

JumpMatrix setting1_l2() {
  return make_jump({0,   0.25, 0.25, 0.25, 0.25,
                    0.7, 0,    0.1,  0.1,  0.1,
                    0.7, 0.1,  0,    0.1,  0.1,
                    0.7, 0.1,  0.1,  0,    0.1,
                    0.7, 0.1,  0.1,  0.1,  0});
}

JumpMatrix setting1_l3() {
  return make_jump({0,   0.4, 0.4, 0.1, 0.1,
                    0.1, 0,   0.7, 0.1, 0.1,
                    0.1, 0.7, 0,   0.1, 0.1,
                    0.1, 0.4, 0.4, 0,   0.1,
                    0.1, 0.4, 0.4, 0.1, 0});
}

JumpMatrix setting3_l2() {
  return make_jump({0,   0.25, 0.25, 0.25, 0.25,
                    0.7, 0,    0.02, 0.16, 0.12,
                    0.7, 0.08, 0,    0.12, 0.1,
                    0.7, 0.21, 0.05, 0,    0.04,
                    0.7, 0.09, 0.18, 0.03, 0});
}

JumpMatrix setting3_l3() {
  return make_jump({0,    0.4, 0.4, 0.07, 0.13,
                    0.2,  0,   0.7, 0.05, 0.05,
                    0.08, 0.7, 0,   0.12, 0.1,
                    0.19, 0.4, 0.4, 0,    0.01,
                    0.05, 0.4, 0.4, 0.15, 0});
}

JumpMatrix setting4_l2() {
  return make_jump({0,   0.25, 0.25, 0.25, 0.25,
                    0.9, 0,    0.05, 0.04, 0.01,
                    0.8, 0.05, 0,    0.1,  0.05,
                    0.8, 0.03, 0.08, 0,    0.09,
                    0.8, 0.15, 0.03, 0.02, 0});
}

JumpMatrix setting4_l3() {
  return make_jump({0,   0.1,  0.05, 0.05, 0.8,
                    0.6, 0,    0.05, 0.05, 0.3,
                    0.5, 0.05, 0,    0.1,  0.35,
                    0.3, 0.12, 0.08, 0,    0.5,
                    0.8, 0.15, 0.03, 0.02, 0});
}

}  // namespace

SimulationSetting builtin_setting(int which) {
  SimulationSetting s;
  s.sojourn_rate = 1.0;
  switch (which) {
    case 1:
      s.name = "Setting1";
      s.matrices = {uniform_offdiag(), setting1_l2(), setting1_l3()};
      break;
    case 2:
      s.name = "Setting2";
      s.matrices = {cycle_matrix(), setting1_l2(), setting1_l3()};
      break;
    case 3:
      s.name = "Setting3";
      s.matrices = {uniform_offdiag(), setting3_l2(), setting3_l3()};
      break;
    case 4:
      s.name = "Setting4";
      s.matrices = {uniform_offdiag(), setting4_l2(), setting4_l3()};
      break;
    default:
      throw ValidationError("builtin_setting: expected 1..4, got " +
                            std::to_string(which));
  }
  return s;
}

ContinuousTrajectory simulate_trajectory(const JumpMatrix& jump,
                                         const ProbVector& init,
                                         double horizon, std::uint64_t seed,
                                         double sojourn_rate, SojournLaw law) {
  jump.validate();
  init.validate();
  if (init.weights.size() != jump.size) {
    throw ValidationError("simulate_trajectory: init has " +
                          std::to_string(init.weights.size()) +
                          " entries for " + std::to_string(jump.size) +
                          " states");
  }
  if (!(horizon > 0.0)) {
    throw ValidationError("simulate_trajectory: horizon must be positive");
  }
  if (!(sojourn_rate > 0.0)) {
    throw ValidationError("simulate_trajectory: sojourn_rate must be positive");
  }

  Rng rng(seed);
  ContinuousTrajectory traj;
  traj.horizon = horizon;

  int state = rng.categorical(init.weights) + 1;
  traj.events.push_back({0.0, state});
  double t = 0.0;
  while (true) {
    const double sojourn = law == SojournLaw::kExponential
                               ? rng.exponential(sojourn_rate)
                               : 1.0 / sojourn_rate;
    t += sojourn;
    if (t > horizon) break;
    state = rng.categorical(jump.probs.row(state - 1)) + 1;
    traj.events.push_back({t, state});
  }
  return traj;
}

DiscreteSequence discretize_locf(const ContinuousTrajectory& traj, int T) {
  if (T < 1) {
    throw ValidationError("discretize_locf: T must be >= 1");
  }
  if (traj.events.empty()) {
    throw ValidationError("discretize_locf: empty trajectory");
  }

  // Assign each event to its ceiling bucket; later events overwrite earlier
  // ones in the same bucket (last observation wins).
  std::vector<int> bucket(static_cast<std::size_t>(T) + 1, 0);
  for (const auto& ev : traj.events) {
    const int d = static_cast<int>(std::ceil(ev.time));
    if (d >= 0 && d <= T) bucket[d] = ev.state;
  }

  DiscreteSequence seq;
  seq.t_start = 0;
  seq.states.resize(static_cast<std::size_t>(T) + 1);
  int current = bucket[0] != 0 ? bucket[0] : traj.events.front().state;
  for (int t = 0; t <= T; ++t) {
    if (bucket[t] != 0) current = bucket[t];
    seq.states[t] = current;
  }
  return seq;
}

std::vector<int> event_state_sequence(const ContinuousTrajectory& traj) {
  std::vector<int> states;
  states.reserve(traj.events.size());
  for (const auto& ev : traj.events) states.push_back(ev.state);
  return states;
}

Cohort simulate_cohort(const SimulationSetting& setting,
                       const std::vector<int>& class_sizes, int T,
                       const ProbVector& init, std::uint64_t seed) {
  if (class_sizes.size() != setting.matrices.size()) {
    throw ValidationError("simulate_cohort: " +
                          std::to_string(class_sizes.size()) +
                          " class sizes for " +
                          std::to_string(setting.matrices.size()) +
                          " classes");
  }
  for (int n : class_sizes) {
    if (n < 1) {
      throw ValidationError("simulate_cohort: class sizes must be >= 1");
    }
  }

  Cohort cohort;
  int individual = 0;
  for (std::size_t k = 0; k < class_sizes.size(); ++k) {
    for (int j = 0; j < class_sizes[k]; ++j, ++individual) {
      const std::uint64_t sub_seed =
          derive_seed(seed, {static_cast<std::uint64_t>(individual)});
      auto traj = simulate_trajectory(setting.matrices[k], init,
                                      static_cast<double>(T), sub_seed,
                                      setting.sojourn_rate, setting.sojourn_law);
      auto seq = discretize_locf(traj, T);
      seq.id = std::to_string(individual + 1);
      seq.true_class = static_cast<int>(k) + 1;
      cohort.push_back(std::move(seq));
    }
  }
  return cohort;
}

}  // namespace latprof
