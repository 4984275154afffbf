#pragma once

#include <complex>
#include <cstdint>
#include <cmath>
#include <numbers>

namespace qk {

/// Deterministic 64-bit stream generator (splitmix64).
///
/// Used everywhere randomness is needed so that results depend only on the
/// seed handed in, never on scheduling order or the standard library's
/// distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_double();
    double u2 = next_double();
    // Guard against log(0).
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  /// Standard complex normal: independent N(0,1) real and imaginary parts.
  std::complex<double> next_cnormal() {
    const double re = next_normal();
    const double im = next_normal();
    return {re, im};
  }

  /// Uniform phase e^{i theta}, theta in [-pi, pi).
  std::complex<double> next_phase(double mixing = 1.0) {
    const double theta =
        mixing * (2.0 * std::numbers::pi * next_double() - std::numbers::pi);
    return std::polar(1.0, theta);
  }

private:
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// Derives an independent stream seed from a master seed and a stream index.
/// The mapping is pure, so per-sample streams are reproducible regardless of
/// evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  Rng mix(master ^ (0xA24BAED4963EE407ULL + stream * 0x9FB21C651E98DF25ULL));
  mix.next_u64();
  return mix.next_u64();
}

}  // namespace qk
