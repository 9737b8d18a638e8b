// Deterministic counter-based random streams. Every draw is a pure function
// of (seed, stream, counter), so experiment output is bit-identical across
// runs and platforms regardless of evaluation order. No std::<random>
// distributions are used (their sequences are implementation-defined).
#pragma once

#include <cstdint>

namespace pmac {

// SplitMix64 finalizer; good avalanche, passes standard statistical tests.
std::uint64_t splitmix64(std::uint64_t x);

// One independent random stream. Streams with different (seed, stream) pairs
// are decorrelated by double hashing of the stream id into the seed.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53-bit resolution.
  double next_uniform();

  // Exp(1) via inverse CDF, -log1p(-u); strictly positive, finite.
  double next_exp1();

  // Uniform integer in [0, n); n must be >= 1. Uses rejection-free
  // multiply-shift on the 64-bit draw (bias < 2^-64, irrelevant here).
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_ = 0;
};

}  // namespace pmac
