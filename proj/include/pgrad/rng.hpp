#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace pgrad {

/// Deterministic splitmix64 generator. All sampling in the library flows
/// through this so that seeded runs are bit-reproducible across platforms
/// (no reliance on implementation-defined std:: distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one draw per call, deterministic).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Uniform direction on the unit sphere in R^dim.
  std::vector<double> unit_vector(int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& x : v) {
        x = normal();
        norm2 += x * x;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
    return v;
  }

  /// Uniform point in the closed ball of the given radius in R^dim.
  std::vector<double> in_ball(int dim, double radius) {
    auto v = unit_vector(dim);
    const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
    for (auto& x : v) x *= r;
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace pgrad
