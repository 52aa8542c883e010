#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgrad/fft.hpp"

// Periodic box T0 = [0,T^1] x ... x [0,T^p], its uniform tensor grid, dense
// vector fields on that grid, and the discrete Fourier representation the
// calculus layer builds on. Node layout is row-major over the multi-index
// (k^1,...,k^p) with the last axis fastest; the component index is innermost
// in memory. The face t^a = T^a is identified with t^a = 0 and not stored.

namespace pgrad {

struct TorusDomain {
  int p = 0;                       ///< number of periodic axes
  int n = 0;                       ///< codomain dimension
  std::vector<double> periods;     ///< T^1,...,T^p, all > 0
  std::vector<int> grid_sizes;     ///< N^1,...,N^p, all even and >= 4

  std::size_t point_count() const {
    std::size_t c = 1;
    for (int N : grid_sizes) c *= static_cast<std::size_t>(N);
    return c;
  }

  double volume() const {
    double v = 1.0;
    for (double T : periods) v *= T;
    return v;
  }

  double spacing(int axis) const { return periods[axis] / grid_sizes[axis]; }

  /// Quadrature weight of the periodic rectangle rule.
  double quadrature_weight() const {
    return volume() / static_cast<double>(point_count());
  }

  std::size_t node_index(std::span<const int> k) const {
    std::size_t g = 0;
    for (int a = 0; a < p; ++a) g = g * static_cast<std::size_t>(grid_sizes[a]) + static_cast<std::size_t>(k[a]);
    return g;
  }

  void node_coords(std::size_t g, std::span<int> k) const {
    for (int a = p - 1; a >= 0; --a) {
      const auto N = static_cast<std::size_t>(grid_sizes[a]);
      k[a] = static_cast<int>(g % N);
      g /= N;
    }
  }

  void node_position(std::span<const int> k, std::span<double> t) const {
    for (int a = 0; a < p; ++a) t[a] = k[a] * spacing(a);
  }

  bool same_grid(const TorusDomain& o) const {
    return p == o.p && n == o.n && periods == o.periods && grid_sizes == o.grid_sizes;
  }
};

/// Validated construction; rejects non-positive periods, odd or tiny grids.
inline TorusDomain make_domain(int p, int n, std::vector<double> periods,
                               std::vector<int> grid_sizes) {
  if (p < 1) throw std::invalid_argument("make_domain: p must be >= 1");
  if (n < 1) throw std::invalid_argument("make_domain: n must be >= 1");
  if (static_cast<int>(periods.size()) != p)
    throw std::invalid_argument("make_domain: periods must have p entries");
  if (static_cast<int>(grid_sizes.size()) != p)
    throw std::invalid_argument("make_domain: grid_sizes must have p entries");
  for (int a = 0; a < p; ++a) {
    if (!(periods[a] > 0.0) || !std::isfinite(periods[a]))
      throw std::invalid_argument("make_domain: period T^" + std::to_string(a + 1) +
                                  " must be positive (got " + std::to_string(periods[a]) + ")");
    if (grid_sizes[a] < 4 || grid_sizes[a] % 2 != 0)
      throw std::invalid_argument("make_domain: grid size N^" + std::to_string(a + 1) +
                                  " must be even and >= 4 (got " + std::to_string(grid_sizes[a]) + ")");
  }
  return TorusDomain{p, n, std::move(periods), std::move(grid_sizes)};
}

/// Visits every node in storage order; fn(node, multi_index, position).
template <typename Fn>
void for_each_node(const TorusDomain& d, Fn&& fn) {
  const std::size_t count = d.point_count();
  std::vector<int> k(static_cast<std::size_t>(d.p), 0);
  std::vector<double> t(static_cast<std::size_t>(d.p), 0.0);
  for (std::size_t g = 0; g < count; ++g) {
    fn(g, std::span<const int>(k), std::span<const double>(t));
    for (int a = d.p - 1; a >= 0; --a) {
      if (++k[a] < d.grid_sizes[a]) {
        t[a] = k[a] * d.spacing(a);
        break;
      }
      k[a] = 0;
      t[a] = 0.0;
    }
  }
}

/// Discrete map u: grid -> R^n. values[g*n + i] = u^i at node g.
struct Field {
  TorusDomain domain;
  std::vector<double> values;

  Field() = default;
  explicit Field(TorusDomain d)
      : domain(std::move(d)), values(domain.point_count() * static_cast<std::size_t>(domain.n), 0.0) {}

  double at(std::size_t g, int i) const { return values[g * domain.n + i]; }
  double& at(std::size_t g, int i) { return values[g * domain.n + i]; }
};

/// Partial velocities u^i_a. values[(g*n + i)*p + a] = du^i/dt^a at node g.
struct GradientField {
  TorusDomain domain;
  std::vector<double> values;

  GradientField() = default;
  explicit GradientField(TorusDomain d)
      : domain(std::move(d)),
        values(domain.point_count() * static_cast<std::size_t>(domain.n) * static_cast<std::size_t>(domain.p), 0.0) {}

  double at(std::size_t g, int i, int a) const {
    return values[(g * domain.n + i) * domain.p + a];
  }
  double& at(std::size_t g, int i, int a) {
    return values[(g * domain.n + i) * domain.p + a];
  }
};

using SpaceSampler = std::function<void(std::span<const double> t, std::span<double> out)>;

/// Evaluates the sampler at every grid node. Rejects non-finite output; does
/// not (and cannot) detect non-periodic samplers, see verify::periodicity_check.
inline Field sample_field(const TorusDomain& d, const SpaceSampler& sampler) {
  Field f(d);
  std::vector<double> out(static_cast<std::size_t>(d.n));
  for_each_node(d, [&](std::size_t g, std::span<const int>, std::span<const double> t) {
    sampler(t, out);
    for (int i = 0; i < d.n; ++i) {
      if (!std::isfinite(out[i]))
        throw std::runtime_error("sample_field: non-finite sampler output at node " + std::to_string(g));
      f.at(g, i) = out[i];
    }
  });
  return f;
}

/// Per-component complex Fourier coefficients, frequency index in FFT-natural
/// order per axis (index j holds frequency m = j for j < N/2, else j - N).
/// Layout mirrors Field: values[g*n + i].
struct SpectralCoefficients {
  TorusDomain domain;
  std::vector<std::complex<double>> values;

  SpectralCoefficients() = default;
  explicit SpectralCoefficients(TorusDomain d)
      : domain(std::move(d)),
        values(domain.point_count() * static_cast<std::size_t>(domain.n), std::complex<double>(0.0, 0.0)) {}

  /// Frequency index -> storage index along one axis.
  int freq_to_index(int m, int axis) const {
    const int N = domain.grid_sizes[axis];
    if (m < -N / 2 || m >= N / 2)
      throw std::out_of_range("SpectralCoefficients: frequency out of range");
    return m >= 0 ? m : m + N;
  }

  std::complex<double> coeff(std::span<const int> m, int i) const {
    std::vector<int> k(static_cast<std::size_t>(domain.p));
    for (int a = 0; a < domain.p; ++a) k[a] = freq_to_index(m[a], a);
    return values[domain.node_index(k) * domain.n + i];
  }

  std::complex<double>& coeff(std::span<const int> m, int i) {
    std::vector<int> k(static_cast<std::size_t>(domain.p));
    for (int a = 0; a < domain.p; ++a) k[a] = freq_to_index(m[a], a);
    return values[domain.node_index(k) * domain.n + i];
  }
};

namespace detail {

/// Applies the 1-D DFT along one axis of a complex multi-dim array laid out
/// like SpectralCoefficients (component innermost). sign=-1 forward, +1 inverse.
inline void transform_axis(std::vector<std::complex<double>>& data, const TorusDomain& d,
                           int axis, int sign) {
  const int N = d.grid_sizes[axis];
  // stride between consecutive k[axis] values, in units of complex entries
  std::size_t stride = static_cast<std::size_t>(d.n);
  for (int a = d.p - 1; a > axis; --a) stride *= static_cast<std::size_t>(d.grid_sizes[a]);

  std::vector<cplx> line(static_cast<std::size_t>(N));
  const std::size_t block = stride * static_cast<std::size_t>(N);
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      const std::size_t origin = base + off;
      for (int j = 0; j < N; ++j) line[static_cast<std::size_t>(j)] = data[origin + static_cast<std::size_t>(j) * stride];
      fft(line, sign);
      for (int j = 0; j < N; ++j) data[origin + static_cast<std::size_t>(j) * stride] = line[static_cast<std::size_t>(j)];
    }
  }
}

}  // namespace detail

/// Forward DFT per component: coeff(m) = (1/point_count) sum_k u(k) e^{-2pi i m.k/N}.
inline SpectralCoefficients to_spectral(const Field& f) {
  SpectralCoefficients c(f.domain);
  const std::size_t total = f.values.size();
  for (std::size_t idx = 0; idx < total; ++idx) c.values[idx] = std::complex<double>(f.values[idx], 0.0);
  for (int a = 0; a < f.domain.p; ++a) detail::transform_axis(c.values, f.domain, a, -1);
  const double scale = 1.0 / static_cast<double>(f.domain.point_count());
  for (auto& z : c.values) z *= scale;
  return c;
}

/// Inverse DFT; validates Hermitian symmetry (real-valued field) first.
inline Field from_spectral(const SpectralCoefficients& c) {
  const TorusDomain& d = c.domain;
  double max_abs = 0.0;
  for (const auto& z : c.values) max_abs = std::max(max_abs, std::abs(z));
  double worst = 0.0;
  std::vector<int> k(static_cast<std::size_t>(d.p)), neg(static_cast<std::size_t>(d.p));
  for_each_node(d, [&](std::size_t g, std::span<const int> kk, std::span<const double>) {
    // mirror index: -m mod N per axis
    for (int a = 0; a < d.p; ++a) neg[a] = kk[a] == 0 ? 0 : d.grid_sizes[a] - kk[a];
    const std::size_t gm = d.node_index(neg);
    for (int i = 0; i < d.n; ++i) {
      const auto z = c.values[g * d.n + i];
      const auto zm = c.values[gm * d.n + i];
      worst = std::max(worst, std::abs(zm - std::conj(z)));
    }
  });
  if (worst > 1e-10 * std::max(1.0, max_abs))
    throw std::runtime_error("from_spectral: Hermitian symmetry violated (defect " +
                             std::to_string(worst) + ")");

  std::vector<std::complex<double>> work = c.values;
  for (int a = 0; a < d.p; ++a) detail::transform_axis(work, d, a, +1);
  Field f(d);
  for (std::size_t idx = 0; idx < work.size(); ++idx) f.values[idx] = work[idx].real();
  return f;
}

/// Evaluates the trigonometric interpolant at an arbitrary point. The Nyquist
/// mode is split symmetrically (cosine convention), which keeps the evaluation
/// real and matches the stored values at grid nodes exactly.
inline std::vector<double> interpolate(const SpectralCoefficients& c, std::span<const double> t) {
  const TorusDomain& d = c.domain;
  // Per-axis phase tables e^{2pi i m t/T} over the stored index order, with
  // the Nyquist entry replaced by cos(pi N t/T).
  std::vector<std::vector<std::complex<double>>> phase(static_cast<std::size_t>(d.p));
  for (int a = 0; a < d.p; ++a) {
    const int N = d.grid_sizes[a];
    phase[a].resize(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
      const int m = j < N / 2 ? j : j - N;
      if (m == -N / 2) {
        phase[a][static_cast<std::size_t>(j)] =
            std::complex<double>(std::cos(detail::kPi * N * t[a] / d.periods[a]), 0.0);
      } else {
        const double ang = detail::kTwoPi * m * t[a] / d.periods[a];
        phase[a][static_cast<std::size_t>(j)] = std::complex<double>(std::cos(ang), std::sin(ang));
      }
    }
  }
  std::vector<std::complex<double>> acc(static_cast<std::size_t>(d.n), std::complex<double>(0.0, 0.0));
  for_each_node(d, [&](std::size_t g, std::span<const int> k, std::span<const double>) {
    std::complex<double> ph(1.0, 0.0);
    for (int a = 0; a < d.p; ++a) ph *= phase[a][static_cast<std::size_t>(k[a])];
    for (int i = 0; i < d.n; ++i) acc[i] += c.values[g * d.n + i] * ph;
  });
  std::vector<double> out(static_cast<std::size_t>(d.n));
  for (int i = 0; i < d.n; ++i) out[i] = acc[i].real();
  return out;
}

}  // namespace pgrad
