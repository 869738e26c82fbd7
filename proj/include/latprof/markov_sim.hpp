#ifndef LATPROF_MARKOV_SIM_HPP
#define LATPROF_MARKOV_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "latprof/types.hpp"

namespace latprof {

// Sojourn law of the jump process. The exponential law (mean = 1/rate) is the
// default; the constant law holds every state for exactly 1/rate time units.
enum class SojournLaw { kExponential, kConstant };

// One generative scenario: K per-class embedded transition matrices sharing a
// common sojourn law.
struct SimulationSetting {
  std::string name;
  std::vector<JumpMatrix> matrices;
  double sojourn_rate = 1.0;
  SojournLaw sojourn_law = SojournLaw::kExponential;

  int num_classes() const { return static_cast<int>(matrices.size()); }
};

// The four built-in 3-class, 5-state scenarios (which = 1..4).
SimulationSetting builtin_setting(int which);

// Simulate one jump-process path: initial state from `init` at time 0, then
// alternating sojourn draws and next-state draws from `jump`, stopping at the
// first event time past `horizon`. Deterministic given the seed.
ContinuousTrajectory simulate_trajectory(const JumpMatrix& jump,
                                         const ProbVector& init,
                                         double horizon, std::uint64_t seed,
                                         double sojourn_rate = 1.0,
                                         SojournLaw law = SojournLaw::kExponential);

// Map a trajectory to the integer grid t = 0..T: each event lands at the
// ceiling of its time (the last event within a ceiling bucket wins) and gaps
// are filled by carrying the most recent state forward.
DiscreteSequence discretize_locf(const ContinuousTrajectory& traj, int T);

// The raw event states of a trajectory, i.e. the embedded-chain path.
std::vector<int> event_state_sequence(const ContinuousTrajectory& traj);

// Simulate class_sizes[k] individuals from matrices[k], horizon T, and
// LOCF-discretize each. Ids are "1".."N" in class-block order; per-individual
// seeds are derived from `seed`, so cohorts are reproducible regardless of
// simulation order.
Cohort simulate_cohort(const SimulationSetting& setting,
                       const std::vector<int>& class_sizes, int T,
                       const ProbVector& init, std::uint64_t seed);

}  // namespace latprof

#endif  // LATPROF_MARKOV_SIM_HPP
