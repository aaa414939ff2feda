#pragma once

#include <cstdint>
#include <random>

namespace gsched {

// Deterministic RNG front-end. All draws go through explicit mappings so a
// fixed seed reproduces the same trace on any platform (mt19937_64 output is
// standardized; std::bernoulli_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // uniform in [0, bound), unbiased
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Derives a decorrelated seed for a sub-stream (splitter, tie-break, run index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace gsched
