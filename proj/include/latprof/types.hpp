#ifndef LATPROF_TYPES_HPP
#define LATPROF_TYPES_HPP

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace latprof {

// Thrown when an input violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a sequence is too short to compute the requested statistic.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an input is structurally valid but carries no usable signal
// (all-constant feature matrix, no observed state changes, ...).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Embedded-chain transition matrix of a jump process over C ordinal states.
// Row c is the distribution of the next state after leaving state c, so the
// diagonal is identically zero and every row sums to one.
struct JumpMatrix {
  int size = 0;            // C, number of ordinal states
  Eigen::MatrixXd probs;   // C x C, zero diagonal, row-stochastic

  void validate() const;   // throws ValidationError
};

// Discrete distribution over states 1..C.
struct ProbVector {
  Eigen::VectorXd weights;

  void validate() const;   // throws ValidationError

  static ProbVector uniform(int c);
  static ProbVector point_mass(int c, int state);
};

// A realization of the jump process in continuous time: the state entered at
// each event time. The first event is the initial state at time 0; times are
// strictly increasing and consecutive states differ.
struct ContinuousTrajectory {
  struct Event {
    double time = 0.0;
    int state = 0;
  };
  std::vector<Event> events;
  double horizon = 0.0;
};

// One individual's ordinal states on an integer grid. Simulated sequences are
// indexed t = 0..T (t_start = 0); ingested real data keep t = 1..T_i.
struct DiscreteSequence {
  std::string id;
  std::vector<int> states;          // values in 1..C
  std::optional<int> true_class;    // 1..K when known (simulated cohorts)
  int t_start = 0;

  int length() const { return static_cast<int>(states.size()); }
};

using Cohort = std::vector<DiscreteSequence>;

// Largest state value appearing anywhere in the cohort (lower bound for C).
int max_state(const Cohort& cohort);

}  // namespace latprof

#endif  // LATPROF_TYPES_HPP
