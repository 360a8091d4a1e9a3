#pragma once

// Portable seeded randomness.
//
// Seeds are 64-bit integers. Sub-streams (dag, layout, episode, trial, ...)
// are derived with SplitMix64 so every consumer gets an independent engine
// from one master seed. Engines are std::mt19937_64, whose output sequence
// is fixed by the C++ standard. The std:: distributions are NOT used: their
// algorithms are implementation-defined, so the conversions below are
// written out to keep instances identical across toolchains.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace erd::rng {

/// One SplitMix64 output for the given state (state advanced by the golden gamma).
constexpr std::uint64_t splitmix64(std::uint64_t state) noexcept {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derive the seed of sub-stream `stream` of `seed`.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

// Named sub-streams of an instance seed.
inline constexpr std::uint64_t kDagStream = 1;
inline constexpr std::uint64_t kLayoutStream = 2;
inline constexpr std::uint64_t kStartStream = 3;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one draw per call, the sine branch is dropped).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace erd::rng
