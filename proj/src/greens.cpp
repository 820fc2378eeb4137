#include "damping/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "damping/bracket.hpp"
#include "damping/fft.hpp"

namespace damping {

namespace {

// Both kernels reduce, after clearing sinh's of large argument, to four
// exponentials with nonpositive exponents over 1 - e^{-2K}:
//   G  = [e^{-K(hi-lo)} + e^{-K(2-hi+lo)} - e^{-K(2-hi-lo)} - e^{-K(hi+lo)}]
//        / (2K (1-e^{-2K}))
//   G' = -K [all four terms with + signs] / (2 (1-e^{-2K}))
// with lo = min(y,z), hi = max(y,z), K = |k|.
struct FourTerms {
  double sum_outer;  // e^{-K(hi-lo)} + e^{-K(2-hi+lo)}
  double sum_inner;  // e^{-K(2-hi-lo)} + e^{-K(hi+lo)}
  double denom;      // 1 - e^{-2K}
};

FourTerms kernel_terms(int k, double y, double z) {
  if (k == 0) throw std::invalid_argument("greens: k must be nonzero");
  const double K = std::abs(static_cast<double>(k));
  const double lo = std::min(y, z), hi = std::max(y, z);
  FourTerms t;
  t.sum_outer = std::exp(-K * (hi - lo)) + std::exp(-K * (2.0 - hi + lo));
  t.sum_inner = std::exp(-K * (2.0 - hi - lo)) + std::exp(-K * (hi + lo));
  t.denom = -std::expm1(-2.0 * K);
  return t;
}

}  // namespace

double eval_G(int k, double y, double z) {
  const FourTerms t = kernel_terms(k, y, z);
  const double K = std::abs(static_cast<double>(k));
  return (t.sum_outer - t.sum_inner) / (2.0 * K * t.denom);
}

double eval_Gprime(int k, double y, double z) {
  if (y == z) throw std::invalid_argument("eval_Gprime: y = z is distributional");
  const FourTerms t = kernel_terms(k, y, z);
  const double K = std::abs(static_cast<double>(k));
  return -K * (t.sum_outer + t.sum_inner) / (2.0 * t.denom);
}

KernelSpectrum localized_kernel(int k, const CoordinateMap& map, int n) {
  if (n < 256 || (n & (n - 1)) != 0)
    throw std::invalid_argument("localized_kernel: n must be a power of two >= 256");
  KernelSpectrum sp;
  sp.k = k;
  sp.n = n;
  const double v_lo = map.v_lo(), v_hi = map.v_hi();
  const double pad = 0.25 * (v_hi - v_lo);
  sp.box_lo = v_lo - pad;
  sp.box_hi = v_hi + pad;
  sp.h = (sp.box_hi - sp.box_lo) / n;
  sp.grid.resize(n);
  for (int i = 0; i < n; ++i) sp.grid[i] = sp.box_lo + i * sp.h;

  // Psi and binv per grid node; Psi vanishes outside [v_lo, v_hi].
  std::vector<double> psi(n, 0.0), yv(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double v = sp.grid[i];
    if (v <= v_lo || v >= v_hi) continue;
    psi[i] = map.Psi(v);
    if (psi[i] != 0.0) yv[i] = map.binv(v);
  }

  sp.values.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (psi[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (psi[j] == 0.0) continue;
      sp.values[static_cast<size_t>(i) * n + j] = psi[i] * eval_G(k, yv[i], yv[j]) * psi[j];
    }
  }

  std::vector<std::complex<double>> in(sp.values.begin(), sp.values.end());
  sp.ghat = fourier_transform_2d(in, n, n, sp.box_lo, sp.h, sp.box_lo, sp.h);
  sp.freq.resize(n);
  for (int m = 0; m < n; ++m) sp.freq[m] = fft_freq(m, n, sp.h);
  return sp;
}

DecayReport verify_kernel_fourier_decay(const KernelSpectrum& sp, double s,
                                        double fit_band_cap) {
  const double p = 0.5 * (s + 1.0);
  const double nyquist = M_PI / sp.h;
  const double guard = 0.4 * nyquist;
  const double fit_guard = std::min(guard, fit_band_cap);
  const double k2 = static_cast<double>(sp.k) * sp.k;

  // Envelope fit on r = log(|ghat| (k^2+eta^2)) vs u = <xi+eta>^p: bucket in
  // u, keep the bucket maxima, then a least-squares line through them. The
  // bucket maxima trace the envelope the bound speaks about; plain least
  // squares over all points would be dragged down by deep anisotropic decay.
  //
  // The fit is restricted to the same-sign cone xi*eta >= 0. The kernel has a
  // derivative kink on the diagonal v = w, so its transform carries an
  // algebraic ridge in the transverse variable xi - eta; on the anti-diagonal
  // that ridge combines with the (k^2+eta^2) compensation into an envelope
  // artifact whose support scales with the guard band, which would make the
  // fitted slope depend on the grid. Inside the cone <xi-eta> <= <xi+eta>, so
  // the compensated envelope at fixed xi+eta is grid-independent and traces
  // the <xi+eta> decay the bound describes. The residual check below still
  // runs over the full guard band.
  constexpr int kBuckets = 48;
  double mag_max = 0.0;
  for (const auto& c : sp.ghat) mag_max = std::max(mag_max, std::abs(c));
  const double floor = 1e-13 * mag_max;

  double u_min = 1e300, u_max = 0.0;
  const int n = sp.n;
  for (int i = 0; i < n; ++i) {
    const double xi = sp.freq[i];
    if (std::abs(xi) > fit_guard) continue;
    for (int j = 0; j < n; ++j) {
      const double eta = sp.freq[j];
      if (std::abs(eta) > fit_guard || xi * eta < 0.0) continue;
      const double u = std::pow(bracket(xi + eta), p);
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
    }
  }
  std::vector<double> bucket_max(kBuckets, -1e300), bucket_u(kBuckets, 0.0);
  for (int i = 0; i < n; ++i) {
    const double xi = sp.freq[i];
    if (std::abs(xi) > fit_guard) continue;
    for (int j = 0; j < n; ++j) {
      const double eta = sp.freq[j];
      if (std::abs(eta) > fit_guard || xi * eta < 0.0) continue;
      const double mag = std::abs(sp.ghat[static_cast<size_t>(i) * n + j]);
      if (mag < floor) continue;
      const double u = std::pow(bracket(xi + eta), p);
      const int bi = std::min(kBuckets - 1,
                              static_cast<int>((u - u_min) / (u_max - u_min) * kBuckets));
      const double r = std::log(mag * (k2 + eta * eta));
      if (r > bucket_max[bi]) {
        bucket_max[bi] = r;
        bucket_u[bi] = u;
      }
    }
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int bi = 0; bi < kBuckets; ++bi) {
    if (bucket_max[bi] < -1e299) continue;
    sx += bucket_u[bi];
    sy += bucket_max[bi];
    sxx += bucket_u[bi] * bucket_u[bi];
    sxy += bucket_u[bi] * bucket_max[bi];
    ++m;
  }
  DecayReport rep;
  if (m < 4) return rep;  // nothing resolved above the floor
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icept = (sy - slope * sx) / m;
  rep.delta_fit = -slope;
  rep.C_fit = std::exp(icept);
  // Residual: how far any resolved point pokes above the fitted envelope.
  double worst = -1e300;
  for (int i = 0; i < n; ++i) {
    const double xi = sp.freq[i];
    if (std::abs(xi) > guard) continue;
    for (int j = 0; j < n; ++j) {
      const double eta = sp.freq[j];
      if (std::abs(eta) > guard) continue;
      const double mag = std::abs(sp.ghat[static_cast<size_t>(i) * n + j]);
      if (mag < floor) continue;
      const double u = std::pow(bracket(xi + eta), p);
      worst = std::max(worst, std::log(mag * (k2 + eta * eta)) - (icept + slope * u));
    }
  }
  rep.max_residual = worst;
  rep.pass = rep.delta_fit > 0.0;
  return rep;
}

std::string DecayReport::to_json() const {
  std::ostringstream os;
  os << "{\"delta_fit\":" << delta_fit << ",\"C_fit\":" << C_fit
     << ",\"max_residual\":" << max_residual << ",\"pass\":" << (pass ? "true" : "false")
     << "}";
  return os.str();
}

namespace {

// Composite quadrature of |F(z)| |log|z-A||^m over z in [0,1], with nodes
// crowded near the potential log singularity (only matters for |A| <= 1).
double log_weighted_l1(int k, double y, bool prime, double A, int m) {
  const int N = 2000;
  const double h = 1.0 / N;
  double acc = 0.0;
  for (int j = 0; j < N; ++j) {
    // midpoint rule; midpoints avoid z = y and z = A exactly
    const double z = (j + 0.5) * h;
    const double f = prime ? eval_Gprime(k, y, z) : eval_G(k, y, z);
    double w = 1.0;
    if (m > 0) w = std::pow(std::abs(std::log(std::abs(z - A))), m);
    acc += std::abs(f) * w * h;
  }
  return acc;
}

double l2_norm_in_z(int k, double y, bool prime) {
  const int N = 2000;
  const double h = 1.0 / N;
  double acc = 0.0;
  for (int j = 0; j < N; ++j) {
    const double z = (j + 0.5) * h;
    const double f = prime ? eval_Gprime(k, y, z) : eval_G(k, y, z);
    acc += f * f * h;
  }
  return std::sqrt(acc);
}

}  // namespace

BoundReport verify_kernel_bounds(int kmax) {
  BoundReport rep;
  const std::vector<double> ys = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  const std::vector<double> As = {-10.0, -5.0, -1.0, -0.5, 0.0, 0.3, 0.5, 0.7, 1.0, 5.0, 10.0};
  double worst = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double lk = std::log(bracket(static_cast<double>(k)));
    for (int m = 0; m <= 3; ++m) {
      const double denom = std::pow(lk + 1.0, m);  // log<k>^m with m=0 guard
      double q_l1 = 0.0, q_l1p = 0.0;
      for (double y : ys)
        for (double A : As) {
          q_l1 = std::max(q_l1, k * static_cast<double>(k) * log_weighted_l1(k, y, false, A, m));
          q_l1p = std::max(q_l1p, log_weighted_l1(k, y, true, A, m));
        }
      const double r = std::max(q_l1, q_l1p) / denom;
      worst = std::max(worst, r);
      std::ostringstream line;
      line << "k=" << k << " m=" << m << " k2_G_L1=" << q_l1 << " Gp_L1=" << q_l1p
           << " ratio=" << r;
      rep.lines.push_back(line.str());
    }
    // alpha = 0 L^2 rows of (Gk1.1) and (Gk3.1)
    double q_l2 = 0.0, q_l2p = 0.0;
    for (double y : ys) {
      q_l2 = std::max(q_l2, std::pow(static_cast<double>(k), 1.5) * l2_norm_in_z(k, y, false));
      q_l2p = std::max(q_l2p, std::pow(static_cast<double>(k), -0.5) * l2_norm_in_z(k, y, true));
    }
    worst = std::max(worst, std::max(q_l2, q_l2p));
    std::ostringstream line;
    line << "k=" << k << " L2_scaled_G=" << q_l2 << " L2_scaled_Gp=" << q_l2p;
    rep.lines.push_back(line.str());
  }
  rep.C_fit = worst;
  rep.worst_ratio = worst;
  rep.pass = worst <= 100.0;
  return rep;
}

std::string BoundReport::to_json() const {
  std::ostringstream os;
  os << "{\"C_fit\":" << C_fit << ",\"worst_ratio\":" << worst_ratio
     << ",\"pass\":" << (pass ? "true" : "false") << "}";
  return os.str();
}

}  // namespace damping
