#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace patina {

// Deterministic randomness for plan sampling and per-op sample streams.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter
// advanced by the golden-gamma constant and passed through a finalizing
// mixer. Every derived draw below is defined purely in terms of successive
// next_u64() values, so a (seed, draw order) pair fully determines the
// sequence on any platform.

inline uint64_t splitmix64_finalize(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Order-free combination of two 64-bit values into a fresh seed:
/// mix64(a, b) = finalize(a ^ finalize(b ^ golden_gamma)).
/// Used for per-image seeds (a = global seed, b = image-id hash) and for
/// per-op sample substreams (a = plan seed, b = op index + 1).
inline uint64_t mix64(uint64_t a, uint64_t b) {
  return splitmix64_finalize(a ^ splitmix64_finalize(b ^ 0x9E3779B97F4A7C15ULL));
}

/// FNV-1a, the stable 64-bit string hash behind image-id seeding.
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_finalize(state_);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n) by 128-bit multiply-shift.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller; the pair's second value is cached.
  double normal01() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal01(); }

  /// Poisson sample. Knuth's product method below lambda = 10, Hormann's
  /// PTRS transformed rejection above it; both consume only uniform01()
  /// draws so the sequence stays platform-stable.
  uint64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 10.0) {
      double limit = std::exp(-lambda);
      double prod = 1.0;
      uint64_t k = 0;
      do {
        prod *= uniform01();
        if (prod <= limit) break;
        ++k;
      } while (true);
      return k;
    }
    // PTRS (Hormann 1993).
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
      double u = uniform01() - 0.5;
      double v = uniform01();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          kf * loglam - lambda - std::lgamma(kf + 1.0)) {
        return static_cast<uint64_t>(kf);
      }
    }
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace patina
