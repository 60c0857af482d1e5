#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace holodyn {

/// Seeded generator with fully pinned output bits.  mt19937_64 supplies raw
/// 64-bit words; the variate transforms below are written out explicitly
/// because the std distributions are implementation-defined and would break
/// bit-reproducibility of seeded experiments.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard complex gaussian with E|g|^2 = 1: radius sqrt(-log u), uniform
  /// phase.
  std::complex<double> gaussian() {
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-std::log1p(-u1));
    double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Uniform point on the unit circle.
  std::complex<double> unit_phase() {
    double phi = 2.0 * std::numbers::pi * uniform01();
    return {std::cos(phi), std::sin(phi)};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace holodyn
