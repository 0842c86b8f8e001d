#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hippo/errors.hpp"

namespace hippo {

// splitmix64, used both as a seed mixer and as a cheap stable hash.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive a child seed from (seed, stream ids). Used everywhere a component
// needs its own reproducible stream (rollout slots, per-iteration collection,
// eval rollouts). Chaining splitmix keeps streams decorrelated.
inline uint64_t derive_seed(uint64_t seed, uint64_t a) {
  return splitmix64(splitmix64(seed) ^ (a + 0x632be59bd9b4e019ULL));
}
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return derive_seed(derive_seed(seed, a, b), c);
}

// Thin RNG wrapper. The engine is standard-specified; the distribution code
// lives here (std:: distributions are implementation-defined, which would
// break the bitwise reproducibility contract across toolchains).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  uint64_t raw() { return engine_(); }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi], inclusive, via rejection (exactly uniform)
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw ArgumentError("uniform_int: lo > hi");
    uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  // standard normal via Box-Muller (no cached spare: two raws per draw,
  // keeps the stream position a pure function of draw count)
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hippo
