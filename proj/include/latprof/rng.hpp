#ifndef LATPROF_RNG_HPP
#define LATPROF_RNG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace latprof {

// SplitMix64 step, used to derive independent sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed derivation: folding each stream component through
// SplitMix64 keeps sub-streams independent of loop order and of each other.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t p : parts) {
    s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  }
  return s;
}

// mt19937_64 with hand-rolled draw mappings. The engine's output sequence is
// fixed by the standard, and mapping draws ourselves (instead of via
// std::*_distribution, whose algorithms are implementation-defined) keeps
// results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1); 53-bit mantissa.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential with the given rate, by inversion.
  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  // Index in [0, n).
  int uniform_index(int n) {
    return static_cast<int>(uniform() * n) % n;
  }

  // Draw from a discrete distribution given by nonnegative weights.
  // Weights need not be normalized. Returns a 0-based index.
  int categorical(const Eigen::VectorXd& weights) {
    const double total = weights.sum();
    double u = uniform() * total;
    const Eigen::Index n = weights.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      u -= weights[i];
      if (u < 0.0) return static_cast<int>(i);
    }
    // Fell off the end through rounding: return the last positive-weight entry.
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      if (weights[i] > 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(n - 1);
  }

  // Symmetric Dirichlet(1) draw: normalized exponentials.
  Eigen::VectorXd dirichlet(int k) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v[i] = exponential(1.0);
    return v / v.sum();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace latprof

#endif  // LATPROF_RNG_HPP
