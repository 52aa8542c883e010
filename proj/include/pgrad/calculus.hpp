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

#include "pgrad/domain.hpp"

// Discrete differential and integral calculus on periodic grid fields:
// pseudospectral and second-order centered derivatives, the Laplacian,
// rectangle-rule quadrature (spectrally accurate on the periodic grid),
// Sobolev norms, the mean/fluctuation split, and the inequality and
// weak-differential checkers.

namespace pgrad {

enum class Scheme { spectral, centered2 };

namespace detail {

/// Neumaier compensated summation; fixed sequential order, reproducible.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Multiplies the spectrum along one axis by a frequency symbol. The Nyquist
/// mode m = -N/2 always maps to 0: the symmetric choice on even grids, which
/// keeps odd-order derivatives real and makes the Laplacian agree with
/// div(grad) exactly.
template <typename Symbol>
void apply_axis_symbol(std::vector<std::complex<double>>& data, const TorusDomain& d,
                       int axis, Symbol&& symbol) {
  const int N = d.grid_sizes[axis];
  std::size_t stride = static_cast<std::size_t>(d.n);
  for (int a = d.p - 1; a > axis; --a) stride *= static_cast<std::size_t>(d.grid_sizes[a]);
  const std::size_t block = stride * static_cast<std::size_t>(N);

  std::vector<std::complex<double>> sym(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const int m = j < N / 2 ? j : j - N;
    sym[static_cast<std::size_t>(j)] =
        (m == -N / 2) ? std::complex<double>(0.0, 0.0) : symbol(m);
  }
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (int j = 0; j < N; ++j) {
      const auto s = sym[static_cast<std::size_t>(j)];
      const std::size_t origin = base + static_cast<std::size_t>(j) * stride;
      for (std::size_t off = 0; off < stride; ++off) data[origin + off] *= s;
    }
  }
}

inline std::vector<std::complex<double>> to_complex(const Field& f) {
  std::vector<std::complex<double>> c(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) c[i] = std::complex<double>(f.values[i], 0.0);
  return c;
}

inline Field real_part(std::vector<std::complex<double>>&& c, const TorusDomain& d) {
  Field f(d);
  for (std::size_t i = 0; i < c.size(); ++i) f.values[i] = c[i].real();
  return f;
}

}  // namespace detail

/// d/dt^axis with the requested scheme.
inline Field axis_derivative(const Field& f, int axis, Scheme scheme) {
  const TorusDomain& d = f.domain;
  if (axis < 0 || axis >= d.p) throw std::invalid_argument("axis_derivative: axis out of range");
  if (scheme == Scheme::spectral) {
    auto c = detail::to_complex(f);
    detail::transform_axis(c, d, axis, -1);
    detail::apply_axis_symbol(c, d, axis, [&](int m) {
      return std::complex<double>(0.0, detail::kTwoPi * m / d.periods[axis]);
    });
    detail::transform_axis(c, d, axis, +1);
    Field out = detail::real_part(std::move(c), d);
    const double scale = 1.0 / static_cast<double>(d.grid_sizes[axis]);
    for (auto& v : out.values) v *= scale;
    return out;
  }
  // centered2: (u(k+e) - u(k-e)) * N / (2T), periodic wraparound
  Field out(d);
  const int N = d.grid_sizes[axis];
  const double inv2h = static_cast<double>(N) / (2.0 * d.periods[axis]);
  std::size_t stride = static_cast<std::size_t>(d.n);
  for (int a = d.p - 1; a > axis; --a) stride *= static_cast<std::size_t>(d.grid_sizes[a]);
  const std::size_t block = stride * static_cast<std::size_t>(N);
  for (std::size_t base = 0; base < f.values.size(); base += block) {
    for (int j = 0; j < N; ++j) {
      const int jp = j + 1 < N ? j + 1 : 0;
      const int jm = j > 0 ? j - 1 : N - 1;
      const std::size_t o = base + static_cast<std::size_t>(j) * stride;
      const std::size_t op = base + static_cast<std::size_t>(jp) * stride;
      const std::size_t om = base + static_cast<std::size_t>(jm) * stride;
      for (std::size_t off = 0; off < stride; ++off)
        out.values[o + off] = (f.values[op + off] - f.values[om + off]) * inv2h;
    }
  }
  return out;
}

/// d^2/d(t^axis)^2 with the requested scheme.
inline Field axis_second_derivative(const Field& f, int axis, Scheme scheme) {
  const TorusDomain& d = f.domain;
  if (axis < 0 || axis >= d.p) throw std::invalid_argument("axis_second_derivative: axis out of range");
  if (scheme == Scheme::spectral) {
    auto c = detail::to_complex(f);
    detail::transform_axis(c, d, axis, -1);
    detail::apply_axis_symbol(c, d, axis, [&](int m) {
      const double w = detail::kTwoPi * m / d.periods[axis];
      return std::complex<double>(-w * w, 0.0);
    });
    detail::transform_axis(c, d, axis, +1);
    Field out = detail::real_part(std::move(c), d);
    const double scale = 1.0 / static_cast<double>(d.grid_sizes[axis]);
    for (auto& v : out.values) v *= scale;
    return out;
  }
  // centered2: 3-point stencil, periodic
  Field out(d);
  const int N = d.grid_sizes[axis];
  const double h = d.spacing(axis);
  const double invh2 = 1.0 / (h * h);
  std::size_t stride = static_cast<std::size_t>(d.n);
  for (int a = d.p - 1; a > axis; --a) stride *= static_cast<std::size_t>(d.grid_sizes[a]);
  const std::size_t block = stride * static_cast<std::size_t>(N);
  for (std::size_t base = 0; base < f.values.size(); base += block) {
    for (int j = 0; j < N; ++j) {
      const int jp = j + 1 < N ? j + 1 : 0;
      const int jm = j > 0 ? j - 1 : N - 1;
      const std::size_t o = base + static_cast<std::size_t>(j) * stride;
      const std::size_t op = base + static_cast<std::size_t>(jp) * stride;
      const std::size_t om = base + static_cast<std::size_t>(jm) * stride;
      for (std::size_t off = 0; off < stride; ++off)
        out.values[o + off] =
            (f.values[op + off] - 2.0 * f.values[o + off] + f.values[om + off]) * invh2;
    }
  }
  return out;
}

/// All partial velocities u^i_a at every node.
inline GradientField partial_derivatives(const Field& f, Scheme scheme) {
  const TorusDomain& d = f.domain;
  GradientField g(d);
  for (int a = 0; a < d.p; ++a) {
    const Field da = axis_derivative(f, a, scheme);
    const std::size_t count = d.point_count();
    for (std::size_t gnode = 0; gnode < count; ++gnode)
      for (int i = 0; i < d.n; ++i) g.at(gnode, i, a) = da.at(gnode, i);
  }
  return g;
}

/// Laplacian = sum of per-axis second derivatives.
inline Field laplacian(const Field& f, Scheme scheme) {
  Field out(f.domain);
  for (int a = 0; a < f.domain.p; ++a) {
    const Field dda = axis_second_derivative(f, a, scheme);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += dda.values[i];
  }
  return out;
}

/// div(V)^i = sum_a d(V^i_a)/dt^a. With the spectral scheme this equals the
/// Laplacian of u when V = partial_derivatives(u); with centered2 it is the
/// exact discrete adjoint of the centered first-derivative quadratic form.
inline Field divergence(const GradientField& v, Scheme scheme) {
  const TorusDomain& d = v.domain;
  Field out(d);
  Field comp(d);
  const std::size_t count = d.point_count();
  for (int a = 0; a < d.p; ++a) {
    for (std::size_t g = 0; g < count; ++g)
      for (int i = 0; i < d.n; ++i) comp.at(g, i) = v.at(g, i, a);
    const Field da = axis_derivative(comp, a, scheme);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += da.values[i];
  }
  return out;
}

/// Componentwise quadrature over the box, weight volume/point_count.
inline std::vector<double> integrate(const Field& f) {
  const TorusDomain& d = f.domain;
  std::vector<detail::CompensatedSum> acc(static_cast<std::size_t>(d.n));
  const std::size_t count = d.point_count();
  for (std::size_t g = 0; g < count; ++g)
    for (int i = 0; i < d.n; ++i) acc[i].add(f.at(g, i));
  std::vector<double> out(static_cast<std::size_t>(d.n));
  const double w = d.quadrature_weight();
  for (int i = 0; i < d.n; ++i) out[i] = acc[i].value() * w;
  return out;
}

/// The volume average u-bar.
inline std::vector<double> mean_part(const Field& f) {
  auto m = integrate(f);
  const double inv_v = 1.0 / f.domain.volume();
  for (auto& x : m) x *= inv_v;
  return m;
}

/// The zero-mean part u-tilde = u - u-bar.
inline Field fluct_part(const Field& f) {
  const auto m = mean_part(f);
  Field out = f;
  const std::size_t count = f.domain.point_count();
  for (std::size_t g = 0; g < count; ++g)
    for (int i = 0; i < f.domain.n; ++i) out.at(g, i) -= m[i];
  return out;
}

inline double l2_norm(const Field& f) {
  detail::CompensatedSum acc;
  for (double v : f.values) acc.add(v * v);
  return std::sqrt(acc.value() * f.domain.quadrature_weight());
}

inline double grad_l2_norm(const GradientField& g) {
  detail::CompensatedSum acc;
  for (double v : g.values) acc.add(v * v);
  return std::sqrt(acc.value() * g.domain.quadrature_weight());
}

/// H^1_T norm; the derivative part uses the spectral scheme.
inline double h1_norm(const Field& f) {
  const double l2 = l2_norm(f);
  const double gr = grad_l2_norm(partial_derivatives(f, Scheme::spectral));
  return std::sqrt(l2 * l2 + gr * gr);
}

/// Outcome of a two-sided bound check: holds iff lhs <= rhs up to a hybrid
/// absolute-relative tolerance, so near-zero right sides do not false-fail.
struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 0.0;
  bool holds = false;
};

inline InequalityReport make_inequality_report(double lhs, double rhs, double constant_used) {
  InequalityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant_used = constant_used;
  r.holds = lhs <= rhs + 1e-12 * std::max(1.0, rhs);
  return r;
}

/// |integral of u| <= sqrt(n T^1...T^p) * ||u||_L2. Equality for constant
/// scalar fields.
inline InequalityReport theorem2_check(const Field& f) {
  const auto integral = integrate(f);
  double lhs2 = 0.0;
  for (double x : integral) lhs2 += x * x;
  const double c = std::sqrt(static_cast<double>(f.domain.n) * f.domain.volume());
  return make_inequality_report(std::sqrt(lhs2), c * l2_norm(f), c);
}

/// Multi-time Wirtinger bound on the fluctuation:
/// integral of |u-tilde| <= C1 * ||du/dt||_L2 with
/// C1 = sqrt(volume) * max_a T^a / (2 pi)  (Cauchy-Schwarz chained with the
/// smallest nonzero Laplacian eigenvalue on the torus; valid, not sharp).
inline InequalityReport wirtinger_check(const Field& f) {
  const TorusDomain& d = f.domain;
  const Field tilde = fluct_part(f);
  detail::CompensatedSum acc;
  const std::size_t count = d.point_count();
  for (std::size_t g = 0; g < count; ++g) {
    double s = 0.0;
    for (int i = 0; i < d.n; ++i) {
      const double v = tilde.at(g, i);
      s += v * v;
    }
    acc.add(std::sqrt(s));
  }
  const double lhs = acc.value() * d.quadrature_weight();
  const double t_max = *std::max_element(d.periods.begin(), d.periods.end());
  const double c1 = std::sqrt(d.volume()) * t_max / detail::kTwoPi;
  const double rhs = c1 * grad_l2_norm(partial_derivatives(f, Scheme::spectral));
  return make_inequality_report(lhs, rhs, c1);
}

/// Vector-valued 1-form v_a dt^a; one component field per axis.
struct OneForm {
  TorusDomain domain;
  std::vector<Field> components;  // size p, each with the domain's n
};

inline OneForm make_one_form(const TorusDomain& d, std::vector<Field> components) {
  if (static_cast<int>(components.size()) != d.p)
    throw std::invalid_argument("make_one_form: need one component field per axis");
  for (const auto& f : components)
    if (!f.domain.same_grid(d)) throw std::invalid_argument("make_one_form: component on a different grid");
  return OneForm{d, std::move(components)};
}

/// The differential du of a field as a 1-form (spectral derivatives).
inline OneForm differential(const Field& f, Scheme scheme = Scheme::spectral) {
  std::vector<Field> comps;
  comps.reserve(static_cast<std::size_t>(f.domain.p));
  for (int a = 0; a < f.domain.p; ++a) comps.push_back(axis_derivative(f, a, scheme));
  return OneForm{f.domain, std::move(comps)};
}

/// Grid-axis-aligned polyline from O to the node identified with T.
/// Waypoints are unreduced integer multi-indices; the end point must wind
/// exactly once around every axis (end[a] = N^a).
struct Curve {
  std::vector<std::vector<long>> waypoints;
  int samples_per_segment = 0;
};

inline Curve make_curve(const TorusDomain& d, std::vector<std::vector<long>> waypoints,
                        int samples_per_segment) {
  if (samples_per_segment < 1)
    throw std::invalid_argument("make_curve: samples_per_segment must be positive");
  if (waypoints.size() < 2) throw std::invalid_argument("make_curve: need at least two waypoints");
  for (const auto& w : waypoints)
    if (static_cast<int>(w.size()) != d.p)
      throw std::invalid_argument("make_curve: waypoint dimension mismatch");
  for (int a = 0; a < d.p; ++a) {
    if (waypoints.front()[a] != 0)
      throw std::invalid_argument("make_curve: curve must start at the origin");
    if (waypoints.back()[a] != d.grid_sizes[a])
      throw std::invalid_argument("make_curve: curve must end at T (one winding per axis)");
  }
  for (std::size_t s = 0; s + 1 < waypoints.size(); ++s) {
    int changed = 0;
    for (int a = 0; a < d.p; ++a)
      if (waypoints[s][a] != waypoints[s + 1][a]) ++changed;
    if (changed != 1)
      throw std::invalid_argument("make_curve: consecutive waypoints must differ on exactly one axis");
  }
  return Curve{std::move(waypoints), samples_per_segment};
}

namespace detail {

/// 1-D Fourier coefficients of one component of a field restricted to the
/// grid line through `anchor` along `axis`.
inline std::vector<std::complex<double>> line_spectrum(const Field& f, int axis,
                                                       std::span<const long> anchor, int comp) {
  const TorusDomain& d = f.domain;
  const int N = d.grid_sizes[axis];
  std::vector<int> k(static_cast<std::size_t>(d.p));
  for (int a = 0; a < d.p; ++a) {
    const long n = d.grid_sizes[a];
    k[a] = static_cast<int>(((anchor[a] % n) + n) % n);
  }
  std::vector<std::complex<double>> line(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    k[axis] = j;
    line[static_cast<std::size_t>(j)] =
        std::complex<double>(f.at(d.node_index(k), comp), 0.0);
  }
  fft(line, -1);
  const double scale = 1.0 / static_cast<double>(N);
  for (auto& z : line) z *= scale;
  return line;
}

/// Evaluates a 1-D trigonometric polynomial (coefficients in FFT order,
/// period T, Nyquist as cosine) at x.
inline double eval_line(const std::vector<std::complex<double>>& coef, double period, double x) {
  const int N = static_cast<int>(coef.size());
  std::complex<double> acc(0.0, 0.0);
  for (int j = 0; j < N; ++j) {
    const int m = j < (N + 1) / 2 ? j : j - N;
    if (N % 2 == 0 && j == N / 2) {
      acc += coef[static_cast<std::size_t>(j)] * std::cos(kPi * N * x / period);
    } else {
      const double ang = kTwoPi * m * x / period;
      acc += coef[static_cast<std::size_t>(j)] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }
  return acc.real();
}

}  // namespace detail

/// Line integral of v_a dt^a along an axis-aligned O -> T polyline. Each
/// segment samples the trigonometric interpolant of the active component at
/// samples_per_segment uniformly spaced points over the line's full period
/// (starting at the segment start), recovers the line's mode content from
/// those samples, and integrates the modes in closed form over the segment.
/// Exact once samples_per_segment >= the grid size of the active axis.
inline std::vector<double> path_integral(const OneForm& form, const Curve& curve) {
  const TorusDomain& d = form.domain;
  std::vector<detail::CompensatedSum> acc(static_cast<std::size_t>(d.n));
  const int q = curve.samples_per_segment;

  for (std::size_t s = 0; s + 1 < curve.waypoints.size(); ++s) {
    const auto& a = curve.waypoints[s];
    const auto& b = curve.waypoints[s + 1];
    int axis = -1;
    for (int ax = 0; ax < d.p; ++ax)
      if (a[ax] != b[ax]) axis = ax;
    if (axis < 0) throw std::invalid_argument("path_integral: degenerate segment");
    const double h = d.spacing(axis);
    const double x0 = static_cast<double>(a[axis]) * h;
    const double seg_len = static_cast<double>(b[axis] - a[axis]) * h;
    const double period = d.periods[axis];

    for (int i = 0; i < d.n; ++i) {
      const auto line = detail::line_spectrum(form.components[static_cast<std::size_t>(axis)],
                                              axis, a, i);
      // Sample the interpolant over one full period from the segment start.
      std::vector<detail::cplx> samples(static_cast<std::size_t>(q));
      for (int j = 0; j < q; ++j) {
        const double x = x0 + period * static_cast<double>(j) / static_cast<double>(q);
        samples[static_cast<std::size_t>(j)] =
            detail::cplx(detail::eval_line(line, period, x), 0.0);
      }
      detail::fft(samples, -1);
      const double scale = 1.0 / static_cast<double>(q);
      // Closed-form integral of each recovered mode over [0, seg_len] in the
      // segment-anchored coordinate.
      std::complex<double> integral(0.0, 0.0);
      for (int j = 0; j < q; ++j) {
        const std::complex<double> cj = samples[static_cast<std::size_t>(j)] * scale;
        const int m = j < (q + 1) / 2 ? j : j - q;
        if (m == 0) {
          integral += cj * seg_len;
        } else if (q % 2 == 0 && j == q / 2) {
          const double w = detail::kPi * q / period;
          integral += cj * (std::sin(w * seg_len) / w);
        } else {
          const double w = detail::kTwoPi * m / period;
          const std::complex<double> iw(0.0, w);
          integral += cj * (std::exp(iw * seg_len) - 1.0) / iw;
        }
      }
      acc[static_cast<std::size_t>(i)].add(integral.real());
    }
  }

  std::vector<double> out(static_cast<std::size_t>(d.n));
  for (int i = 0; i < d.n; ++i) out[i] = acc[static_cast<std::size_t>(i)].value();
  return out;
}

/// Domain-integral form of the weak-differential identity: returns
///   max over test modes f of | sum_a [ (u, df/dt^a) + (v_a, f) ] |
/// with f running over cos/sin(2 pi k t^a / T^a) e^i for k = 0..max_mode, all
/// axes and components. Near zero indicates v is the weak differential of u.
inline double weak_identity_check(const Field& u, const OneForm& v, int max_mode) {
  const TorusDomain& d = u.domain;
  if (!v.domain.same_grid(d)) throw std::invalid_argument("weak_identity_check: domain mismatch");
  int min_n = d.grid_sizes[0];
  for (int N : d.grid_sizes) min_n = std::min(min_n, N);
  if (max_mode < 0 || max_mode > min_n / 2 - 1)
    throw std::invalid_argument("weak_identity_check: max_mode exceeds the band limit");

  const std::size_t count = d.point_count();
  double worst = 0.0;

  // Constant test functions f = e^i: the identity reduces to sum_a (v_a^i, 1).
  for (int i = 0; i < d.n; ++i) {
    detail::CompensatedSum s;
    for (int a = 0; a < d.p; ++a) {
      const auto& va = v.components[static_cast<std::size_t>(a)];
      for (std::size_t g = 0; g < count; ++g) s.add(va.at(g, i));
    }
    worst = std::max(worst, std::abs(s.value() * d.quadrature_weight()));
  }

  for (int axis = 0; axis < d.p; ++axis) {
    const int N = d.grid_sizes[axis];
    const double freq_base = detail::kTwoPi / d.periods[axis];
    for (int k = 1; k <= max_mode; ++k) {
      // Tabulate the mode and its exact axis derivative along the axis.
      std::vector<double> cosv(static_cast<std::size_t>(N)), sinv(static_cast<std::size_t>(N));
      for (int j = 0; j < N; ++j) {
        const double th = detail::kTwoPi * k * j / static_cast<double>(N);
        cosv[static_cast<std::size_t>(j)] = std::cos(th);
        sinv[static_cast<std::size_t>(j)] = std::sin(th);
      }
      const double wfreq = freq_base * k;
      for (int trig = 0; trig < 2; ++trig) {
        for (int i = 0; i < d.n; ++i) {
          detail::CompensatedSum s;
          for_each_node(d, [&](std::size_t g, std::span<const int> kidx, std::span<const double>) {
            const auto j = static_cast<std::size_t>(kidx[axis]);
            const double fval = trig == 0 ? cosv[j] : sinv[j];
            const double dfval = trig == 0 ? -wfreq * sinv[j] : wfreq * cosv[j];
            double term = u.at(g, i) * dfval;
            for (int a = 0; a < d.p; ++a)
              term += v.components[static_cast<std::size_t>(a)].at(g, i) * fval;
            s.add(term);
          });
          worst = std::max(worst, std::abs(s.value() * d.quadrature_weight()));
        }
      }
    }
  }
  return worst;
}

}  // namespace pgrad
