#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace qembed {

/// Seedable random generator used by every stochastic component.
///
/// The core engine is std::mt19937_64, whose output stream is pinned by the
/// standard.  The floating-point transforms are done by hand because the
/// std::*_distribution classes are free to differ between standard libraries,
/// which would break run-for-run reproducibility of seeded experiments.
///
/// Multi-run studies derive per-run streams as Rng(base_seed + run_index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), unbiased (rejection of the partial block).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = next();
      r = x % n;
    } while (x - r > std::uint64_t(0) - n);
    return r;
  }

  /// Standard normal draw (Box-Muller, second value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qembed
