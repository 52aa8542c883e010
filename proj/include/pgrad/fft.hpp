#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Self-contained complex FFT: iterative radix-2 for power-of-two sizes,
// Bluestein's chirp-z algorithm for everything else. Unnormalized in both
// directions; callers apply their own 1/N convention. No global state, so
// transforms are safe to run concurrently on distinct buffers.

namespace pgrad::detail {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey. sign = -1 forward, +1 inverse.
inline void fft_pow2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTwoPi / static_cast<double>(len);
    const cplx w_len(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= w_len;
      }
    }
  }
}

// Bluestein chirp-z transform for arbitrary n, via a power-of-two convolution.
inline void fft_bluestein(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n + 1) m <<= 1;

  // chirp[k] = exp(sign * i * pi * k^2 / n); reduce k^2 mod 2n to keep the
  // angle argument small.
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<cplx> x(m, cplx(0.0, 0.0));
  std::vector<cplx> y(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    y[m - k] = std::conj(chirp[k]);
  }

  fft_pow2(x, -1);
  fft_pow2(y, -1);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, +1);

  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k] * scale;
}

// Unnormalized DFT: forward (sign=-1) computes sum_k a_k e^{-2pi i jk/n}.
inline void fft(std::vector<cplx>& a, int sign) {
  if (sign != -1 && sign != +1) throw std::invalid_argument("fft: sign must be -1 or +1");
  if (is_pow2(a.size()))
    fft_pow2(a, sign);
  else
    fft_bluestein(a, sign);
}

}  // namespace pgrad::detail
