#pragma once

#include <cmath>
#include <cstdint>

namespace asmp {

// Counter-based deterministic randomness. Every draw is a pure function of
// (seed, stream, index), so results do not depend on call order.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

// Uniform in [0, 1), 53-bit resolution.
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return static_cast<double>(key(seed, stream, index) >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                         double lo, double hi) {
  return lo + (hi - lo) * uniform(seed, stream, index);
}

// Standard normal via Box-Muller on two keyed uniforms.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  double u1 = uniform(seed, stream, 2 * index);
  double u2 = uniform(seed, stream, 2 * index + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace rng

// Sequential generator for one-shot construction work (waveform segments).
class Splitmix64 {
 public:
  explicit Splitmix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return rng::mix64(state_);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace asmp
