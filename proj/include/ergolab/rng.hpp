#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ergolab::rng {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based generator: the word for (seed, index, lane) is
//   splitmix64(splitmix64(seed) ^ splitmix64(index * 256 + lane)).
// Any draw can be recomputed without replaying the stream, which makes
// sample_path(n + k) and "advance by k, then sample n" agree trivially.
constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t index,
                             std::uint32_t lane) {
  return splitmix64(splitmix64(seed) ^ splitmix64((index << 8) | (lane & 0xFFu)));
}

// Open interval (0, 1): never returns 0 or 1.
inline double to_unit(std::uint64_t b) {
  return (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t index, std::uint32_t lane) {
  return to_unit(bits(seed, index, lane));
}

// Box-Muller on two lanes (lane, lane + 1).
inline double normal(std::uint64_t seed, std::uint64_t index, std::uint32_t lane) {
  const double u1 = uniform(seed, index, lane);
  const double u2 = uniform(seed, index, lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Sequential convenience wrapper over the counter scheme.
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint32_t lane = 0) : seed_(seed), lane_(lane) {}

  std::uint64_t next() { return bits(seed_, counter_++, lane_); }
  double uniform() { return to_unit(next()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  // Uniform integer in [0, n) by multiply-shift; bias is below 2^-64 * n.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint32_t lane_;
  std::uint64_t counter_ = 0;
};

}  // namespace ergolab::rng
