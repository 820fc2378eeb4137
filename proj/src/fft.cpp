#include "damping/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace damping {

namespace {
// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<cplx> fourier_transform(const std::vector<cplx>& f, double v0, double dv) {
  const int n = static_cast<int>(f.size());
  if (n == 0) throw std::invalid_argument("fourier_transform: empty input");
  std::vector<cplx> out(f);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(out.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  for (int m = 0; m < n; ++m) {
    const double xi = fft_freq(m, n, dv);
    out[m] *= dv * std::exp(cplx(0.0, -xi * v0));
  }
  return out;
}

std::vector<cplx> fourier_transform_2d(const std::vector<cplx>& g, int nv, int nw, double v0,
                                       double dv, double w0, double dw) {
  if (static_cast<int>(g.size()) != nv * nw)
    throw std::invalid_argument("fourier_transform_2d: size mismatch");
  std::vector<cplx> out(g);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_2d(nv, nw, reinterpret_cast<fftw_complex*>(out.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  for (int p = 0; p < nv; ++p) {
    const double xi = fft_freq(p, nv, dv);
    for (int q = 0; q < nw; ++q) {
      const double eta = fft_freq(q, nw, dw);
      out[p * nw + q] *= dv * dw * std::exp(cplx(0.0, -(xi * v0 + eta * w0)));
    }
  }
  return out;
}

}  // namespace damping
