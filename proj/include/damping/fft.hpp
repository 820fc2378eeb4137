#pragma once

#include <complex>
#include <vector>

namespace damping {

using cplx = std::complex<double>;

// Discrete approximations of the continuum transform
//   f~(xi) = \int f(v) e^{-i xi v} dv,
// on uniform grids. Frequencies follow FFT ordering; use fft_freq for the
// physical frequency of each bin.

// In-place-capable 1D forward transform of samples on v_j = v0 + j*dv.
// Output bin m approximates f~(fft_freq(m, n, dv)).
std::vector<cplx> fourier_transform(const std::vector<cplx>& f, double v0, double dv);

// 2D transform of row-major samples g[i*nw + j] on (v_i, w_j); output bin
// (p, q) approximates g~(xi_p, eta_q) with the same frequency ordering.
std::vector<cplx> fourier_transform_2d(const std::vector<cplx>& g, int nv, int nw,
                                       double v0, double dv, double w0, double dw);

// Physical frequency of FFT bin m for n samples with spacing d.
inline double fft_freq(int m, int n, double d) {
  const int half = n / 2;
  const int mm = (m <= half - 1 + (n % 2)) ? m : m - n;
  return 2.0 * 3.14159265358979323846 * mm / (n * d);
}

}  // namespace damping
