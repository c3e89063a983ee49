#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace anisofrac {

/// mt19937_64 with distribution code fixed here, so draws are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  int index(int n) { return static_cast<int>(unit() * n); }

  /// Uniform point of the ball of radius r in R^N, N in {1, 2}; radius in [r_lo, r_hi) for shells.
  std::vector<double> in_shell(int N, double r_lo, double r_hi) {
    if (N == 1) {
      const double r = uniform(r_lo, r_hi);
      return {unit() < 0.5 ? -r : r};
    }
    const double r = std::sqrt(uniform(r_lo * r_lo, r_hi * r_hi));
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<double> p(N, 0.0);
    p[0] = r * std::cos(t);
    p[1] = r * std::sin(t);
    return p;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace anisofrac
