#pragma once

#include <cstdint>
#include <random>

namespace dpbinom {

// Deterministic random source. All draws are derived from raw 64-bit engine
// words rather than std::*_distribution adapters, so a seed reproduces the
// same stream on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on [-1/2, 1/2).
  double uniform_centered() { return uniform01() - 0.5; }

  // Number of failures before the first success, success probability 1 - b.
  // b = 0 degenerates to a point mass at 0.
  long long geometric(double b);

  // Centered Laplace draw with the given scale (scale > 0).
  double laplace(double scale);

  bool bernoulli(double p) { return uniform01() < p; }

  // Sum of n Bernoulli(theta) draws; O(n), used at simulation scale only.
  int binomial(int n, double theta);

 private:
  std::mt19937_64 eng_;
};

// Stable replicate-level seed derivation: hash of (seed, point, replicate).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t point,
                       std::uint64_t replicate);

}  // namespace dpbinom
