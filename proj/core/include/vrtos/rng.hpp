#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vrtos {

// Deterministic random stream. Wraps mt19937_64 behind fixed integer and
// real mappings: std::uniform_*_distribution is implementation defined, and
// traces must be reproducible across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n), unbiased (top-bucket rejection).
  std::size_t bounded(std::size_t n) {
    const std::uint64_t m = static_cast<std::uint64_t>(n);
    std::uint64_t x, r;
    do {
      x = engine_();
      r = x % m;
    } while (x - r > std::uint64_t(0) - m);
    return static_cast<std::size_t>(r);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double unit_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_real(); }

  // Standard normal via Box-Muller, one spare cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit_real();
    while (u1 <= 0.0) u1 = unit_real();
    const double u2 = unit_real();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace vrtos
