#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace phaserand {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// SplitMix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: draw k of stream s is finalize(key(seed,s) + k*phi),
// so any (seed, stream) pair can be replayed independently of every other
// stream. Monte Carlo loops give sample i its own stream, which makes serial
// and partitioned execution produce identical numbers.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(mix64(seed + 0x632be59bd9b4e019ULL) ^
                   (stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, 2*pi).
  double next_angle() { return kTwoPi * next_double(); }

  // Uniform integer in [0, bound); rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller. std::normal_distribution is
  // implementation-defined, which would break bit-exact reproducibility.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    cached_ = radius * std::sin(kTwoPi * u2);
    have_cached_ = true;
    return radius * std::cos(kTwoPi * u2);
  }

  // Re(z), Im(z) independent standard normals.
  std::complex<double> next_complex_normal() {
    const double re = next_normal();
    const double im = next_normal();
    return {re, im};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace phaserand
