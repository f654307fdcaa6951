#pragma once

#include <cmath>
#include <cstdint>

namespace efent {

/// splitmix64: 64-bit state, one multiply-xor-shift chain per output.
/// Small, fast, and passes BigCrush when used as done here; chosen so the
/// whole sampling stack is self-contained and byte-reproducible across
/// platforms for a fixed build.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0, 1): 53-bit mantissa offset by
  /// half an ulp so 0 and 1 are unreachable (safe under log()).
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the paired variate is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = next_unit();
    const double v = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double phi = 2.0 * kPi * v;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  /// Poisson draw: sequential inversion for small means, the PTRS
  /// transformed-rejection scheme for large ones.
  double next_poisson(double lambda) {
    if (lambda <= 30.0) {
      const double l = std::exp(-lambda);
      double p = 1.0;
      double k = 0.0;
      do {
        k += 1.0;
        p *= next_unit();
      } while (p > l);
      return k - 1.0;
    }
    return poisson_ptrs(lambda);
  }

 private:
  double poisson_ptrs(double lambda) {
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    for (;;) {
      const double u = next_unit() - 0.5;
      const double v = next_unit();
      const double us = 0.5 - std::abs(u);
      const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
      if (us >= 0.07 && v <= v_r) return k;
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          k * log_lambda - lambda - std::lgamma(k + 1.0)) {
        return k;
      }
    }
  }

  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t state_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Points are generated in fixed-size chunks, each from its own generator, so
/// estimates are reproducible for a given (seed, chunk index) regardless of
/// how many points a caller asks for: the first min(n, m) draws of runs with
/// n and m points are identical.
inline constexpr std::uint64_t kChunkPoints = 65536;

/// Generator for chunk `k` of master seed `s`: a fresh splitmix64 chain whose
/// start state is the splitmix finalizer applied to s + (k+1) * golden ratio.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return SplitMix64(z);
}

}  // namespace efent
