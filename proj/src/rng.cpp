#include "pmac/rng.hpp"

#include <cmath>

namespace pmac {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  // Decorrelate streams by hashing the stream id before mixing it into the
  // seed; the stream then advances as a plain SplitMix64 sequence.
  state_ = splitmix64(seed ^ splitmix64(stream ^ 0x6a09e667f3bcc909ULL));
}

std::uint64_t RandomStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double RandomStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_exp1() {
  // Inverse CDF of Exp(1); u in [0,1) keeps the argument of log1p in
  // (-1, 0], so the result is finite and >= 0 (0 occurs with prob 2^-53).
  return -std::log1p(-next_uniform());
}

std::uint64_t RandomStream::next_below(std::uint64_t n) {
  // Multiply-shift map of a 64-bit draw onto [0, n); bias is O(n / 2^64).
  const std::uint64_t x = next_u64();
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n)) >> 64);
}

}  // namespace pmac
