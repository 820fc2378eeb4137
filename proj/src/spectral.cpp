#include "damping/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "damping/bracket.hpp"
#include "damping/greens.hpp"

namespace damping {

namespace {

double l2_norm(const std::vector<cplx>& f, double h) {
  double acc = 0.0;
  for (size_t j = 1; j + 1 < f.size(); ++j) acc += std::norm(f[j]);
  acc += 0.5 * (std::norm(f.front()) + std::norm(f.back()));
  return std::sqrt(acc * h);
}

cplx interp_uniform(const std::vector<cplx>& f, double x) {
  const int n = static_cast<int>(f.size()) - 1;
  const double h = 1.0 / n;
  double u = x / h;
  int j = static_cast<int>(std::floor(u)) - 1;
  j = std::clamp(j, 0, n - 3);
  const double t = u - j;
  const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return w0 * f[j] + w1 * f[j + 1] + w2 * f[j + 2] + w3 * f[j + 3];
}

// Complex Thomas solve of (k^2 + 2/h^2 + c_j) x_j - (x_{j-1} + x_{j+1})/h^2
// = r_j on the interior of an (n+1)-point grid, Dirichlet ends.
std::vector<cplx> tridiag_interior(int k, int n, const std::vector<cplx>& c,
                                   const std::vector<cplx>& r) {
  const double h = 1.0 / n;
  const double off = -1.0 / (h * h);
  const int m = n - 1;
  std::vector<cplx> cp(m), dp(m);
  cplx diag0 = static_cast<double>(k) * k + 2.0 / (h * h) + c[1];
  cp[0] = off / diag0;
  dp[0] = r[1] / diag0;
  for (int i = 1; i < m; ++i) {
    const cplx diag = static_cast<double>(k) * k + 2.0 / (h * h) + c[i + 1];
    const cplx denom = diag - off * cp[i - 1];
    cp[i] = off / denom;
    dp[i] = (r[i + 1] - off * dp[i - 1]) / denom;
  }
  std::vector<cplx> x(n + 1, cplx(0.0));
  x[m] = dp[m - 1];
  for (int i = m - 2; i >= 0; --i) x[i + 1] = dp[i] - cp[i] * x[i + 2];
  return x;
}

struct ProfileTables {
  std::vector<double> b, b1, b2;
  double min_b1 = 1.0;
};

// Cached per (profile values, n): the eigenfunction solves inside the
// representation quadrature reuse one grid thousands of times. Keyed by the
// values that determine b, never by address (stack reuse).
const ProfileTables& profile_tables(const ShearProfile& p, int n) {
  struct Key {
    bool couette;
    double amplitude, shape_a, theta0;
    int n;
    bool operator==(const Key&) const = default;
  };
  static thread_local Key cached{true, -1.0, -1.0, -1.0, -1};
  static thread_local ProfileTables tables;
  const Key key{p.is_couette(), p.amplitude(), p.shape_a(), p.theta0(), n};
  if (cached == key) return tables;
  ProfileTables t;
  t.b.resize(n + 1);
  t.b1.resize(n + 1);
  t.b2.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const Jet3 bj = p.jet(static_cast<double>(j) / n);
    t.b[j] = bj.f;
    t.b1[j] = bj.f1;
    t.b2[j] = bj.f2;
    t.min_b1 = std::min(t.min_b1, bj.f1);
  }
  tables = std::move(t);
  cached = key;
  return tables;
}

}  // namespace

EigenfunctionSlice solve_eigenfunction(const ShearProfile& p, int k, double y0, double eps,
                                       int iota, const std::vector<cplx>& omega0) {
  if (k == 0) throw std::invalid_argument("solve_eigenfunction: k must be nonzero");
  if (eps == 0.0 || std::abs(eps) > 0.25)
    throw std::invalid_argument("solve_eigenfunction: eps must be nonzero with |eps| <= 1/4");
  const int n = static_cast<int>(omega0.size()) - 1;
  const double h = 1.0 / n;
  const ProfileTables& tb = profile_tables(p, n);
  if (std::abs(eps) < 5.0 * h * tb.min_b1) {
    std::ostringstream os;
    os << "solve_eigenfunction: |eps| below the critical-layer floor; need n >= "
       << static_cast<int>(std::ceil(5.0 * tb.min_b1 / std::abs(eps)));
    throw std::invalid_argument(os.str());
  }
  const double by0 = p.b(y0);
  const cplx shift(0.0, iota * eps);

  std::vector<cplx> c(n + 1), r(n + 1);
  for (int j = 0; j <= n; ++j) {
    const cplx d = 1.0 / (tb.b[j] - by0 + shift);
    c[j] = tb.b2[j] * d;
    r[j] = omega0[j] * d;
  }
  EigenfunctionSlice s;
  s.k = k;
  s.y0 = y0;
  s.eps = eps;
  s.iota = iota;
  s.psi = tridiag_interior(k, n, c, r);

  // discrete differential residual (machine-level by construction)
  double rmax = 0.0, scale = 0.0;
  for (int j = 1; j < n; j += std::max(1, n / 32)) {
    const cplx res = (static_cast<double>(k) * k + c[j]) * s.psi[j] -
                     (s.psi[j + 1] - 2.0 * s.psi[j] + s.psi[j - 1]) / (h * h) - r[j];
    rmax = std::max(rmax, std::abs(res));
    scale = std::max(scale, std::abs(r[j]));
  }
  s.residual = scale > 0.0 ? rmax / scale : 0.0;

  // integral reformulation (H0) at a coarse y sample, trapezoid in z
  double hmax = 0.0, hscale = 0.0;
  const int zstride = std::max(1, n / 256);  // trapezoid error (zstride h)^2
  for (int iy = 1; iy <= 7; ++iy) {
    const double y = iy / 8.0;
    cplx lhs = interp_uniform(s.psi, y);
    cplx rhs(0.0);
    for (int j = 0; j <= n; j += zstride) {
      const double wq = (j == 0 || j == n) ? 0.5 * zstride * h : zstride * h;
      const double G = eval_G(k, y, static_cast<double>(j) / n);
      lhs += G * c[j] * s.psi[j] * wq;
      rhs += G * r[j] * wq;
    }
    hmax = std::max(hmax, std::abs(lhs - rhs));
    hscale = std::max(hscale, std::abs(rhs));
  }
  s.residual_h0 = hscale > 0.0 ? hmax / hscale : 0.0;
  return s;
}

LapDifference lap_difference(const ShearProfile& p, int k, double y0,
                             const std::vector<cplx>& omega0,
                             const std::vector<double>& eps_schedule, bool odd_elimination) {
  if (eps_schedule.size() < 2)
    throw std::invalid_argument("lap_difference: schedule needs >= 2 entries");
  for (size_t i = 1; i < eps_schedule.size(); ++i)
    if (eps_schedule[i] >= eps_schedule[i - 1])
      throw std::invalid_argument("lap_difference: schedule must decrease");

  const size_t n = omega0.size();
  std::vector<std::vector<cplx>> diffs;
  std::vector<double> norms;
  for (double eps : eps_schedule) {
    const auto minus = solve_eigenfunction(p, k, y0, eps, -1, omega0);
    const auto plus = solve_eigenfunction(p, k, y0, eps, +1, omega0);
    std::vector<cplx> d(n);
    for (size_t j = 0; j < n; ++j) d[j] = minus.psi[j] - plus.psi[j];
    norms.push_back(l2_norm(d, 1.0 / (n - 1)));
    diffs.push_back(std::move(d));
  }
  LapDifference out;
  const size_t m = diffs.size();
  out.limit.resize(n);
  if (odd_elimination && m >= 3) {
    // D(eps) = L + c1 eps + c3 eps^3 through the last three points of a
    // halving schedule (eps, 2 eps, 4 eps).
    const auto &D1 = diffs[m - 1], &D2 = diffs[m - 2], &D3 = diffs[m - 3];
    for (size_t j = 0; j < n; ++j) {
      const cplx c3e3 = (D3[j] - 3.0 * D2[j] + 2.0 * D1[j]) / 42.0;
      const cplx c1e = (D2[j] - D1[j]) - 7.0 * c3e3;
      out.limit[j] = D1[j] - c1e - c3e3;
    }
  } else {
    const auto &D1 = diffs[m - 1], &D2 = diffs[m - 2];
    for (size_t j = 0; j < n; ++j) out.limit[j] = 2.0 * D1[j] - D2[j];
  }
  out.norm = l2_norm(out.limit, 1.0 / (n - 1));

  // empirical order from the last three increments, plus a ratio test
  if (m >= 3) {
    std::vector<cplx> inc1(n), inc2(n);
    for (size_t j = 0; j < n; ++j) {
      inc1[j] = diffs[m - 1][j] - diffs[m - 2][j];
      inc2[j] = diffs[m - 2][j] - diffs[m - 3][j];
    }
    const double i1 = l2_norm(inc1, 1.0 / (n - 1));
    const double i2 = l2_norm(inc2, 1.0 / (n - 1));
    if (i1 > 0.0 && i2 > 0.0) {
      out.order_est = std::log2(i2 / i1);
      out.converged = i1 <= i2 * 1.05;  // increments must not grow
    }
  }
  return out;
}

std::vector<cplx> assemble_stream(const ShearProfile& p, double t, int k,
                                  const std::vector<cplx>& omega0,
                                  const std::vector<double>& eps_schedule) {
  const int n = static_cast<int>(omega0.size()) - 1;
  double b1max = 0.0;
  for (int j = 0; j <= n; ++j) b1max = std::max(b1max, p.b1(static_cast<double>(j) / n));
  // spec bound is pi/(8 k t max b'); a 4x safety factor keeps the oscillatory
  // quadrature error comfortably under the 1e-2 oracle tolerance
  double spacing = 1.0 / 64.0;
  if (t > 0.0)
    spacing = std::min(spacing, M_PI / (32.0 * std::abs(k) * t * b1max));
  const int ny0 = static_cast<int>(std::ceil(1.0 / spacing));
  const double dy0 = 1.0 / ny0;

  std::vector<cplx> psi(n + 1, cplx(0.0));
  for (int i = 0; i < ny0; ++i) {
    const double y0 = (i + 0.5) * dy0;  // midpoints avoid the endpoints
    const LapDifference d = lap_difference(p, k, y0, omega0, eps_schedule);
    const double phase = -k * p.b(y0) * t;
    const cplx osc = cplx(std::cos(phase), std::sin(phase)) * p.b1(y0) * dy0;
    for (int j = 0; j <= n; ++j) psi[j] += osc * d.limit[j];
  }
  const cplx pref = -1.0 / (2.0 * M_PI * cplx(0.0, 1.0));
  for (auto& v : psi) v *= pref;
  return psi;
}

OperatorProbe operator_probe(const ShearProfile& p, const CoordinateMap& map, int k,
                             double y0, double eps, int n) {
  using Mat = Eigen::MatrixXcd;
  const double h = 1.0 / n;
  const double by0 = p.b(y0);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = (i + 0.5) * h;  // midpoint grid

  std::vector<double> phi(n), bv(n), b2v(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = map.phi(y[i]);
    const Jet3 bj = p.jet(y[i]);
    bv[i] = bj.f;
    b2v[i] = bj.f2;
  }
  Mat T = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (phi[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b2v[j] == 0.0) continue;
      T(i, j) = phi[i] * eval_G(k, y[i], y[j]) * b2v[j] * h / cplx(bv[j] - by0, eps);
    }
  }

  // H^1_k quadratic form Q = h I + (h / k^2) D^T D with forward differences
  Eigen::MatrixXd Q = h * Eigen::MatrixXd::Identity(n, n);
  const double w = h / (static_cast<double>(k) * k * h * h);
  for (int i = 0; i + 1 < n; ++i) {
    Q(i, i) += w;
    Q(i + 1, i + 1) += w;
    Q(i, i + 1) -= w;
    Q(i + 1, i) -= w;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  const Eigen::MatrixXd L = llt.matrixL();
  // B = L^T T L^{-T}; singular values of B are the H^1_k singular values
  const Mat Lc = L.cast<cplx>();
  Mat B = Lc.transpose() * T;
  Mat Bt = B.transpose();
  Bt = Lc.triangularView<Eigen::Lower>().solve(Bt);  // Bt := L^{-1} B^T
  B = Bt.transpose();                                // B := B L^{-T}

  OperatorProbe probe;
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(B.adjoint() * B, Eigen::EigenvaluesOnly);
    probe.Tnorm = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  {
    Mat IB = Mat::Identity(n, n) + B;
    Eigen::SelfAdjointEigenSolver<Mat> es(IB.adjoint() * IB, Eigen::EigenvaluesOnly);
    probe.min_sv = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
  }
  return probe;
}

std::vector<cplx> apply_S(const CoordinateMap& map, int k, double w0, double eps,
                          const std::vector<cplx>& g, const std::vector<double>& vgrid,
                          bool shifted) {
  const int n = static_cast<int>(vgrid.size());
  if (static_cast<int>(g.size()) != n) throw std::invalid_argument("apply_S: size mismatch");
  const double dv = vgrid[1] - vgrid[0];
  // F(v') = G(v, v') dB(v') g(v'); integrate F/(v'-w0+i eps) by parts onto
  // log(v'-w0+i eps). dB has compact support strictly inside the box, so the
  // boundary terms vanish.
  std::vector<cplx> out(n, cplx(0.0));
  std::vector<double> dB(n), yv(n);
  for (int j = 0; j < n; ++j) {
    const double v = vgrid[j];
    if (v <= map.v_lo() || v >= map.v_hi()) {
      dB[j] = 0.0;
      yv[j] = v < map.v_lo() ? 0.0 : 1.0;
      continue;
    }
    yv[j] = map.binv(v);
    dB[j] = map.dB_dv(v);
  }
  std::vector<cplx> F(n), logv(n);
  // principal branch; the shifted form S' carries the w-shift inside the
  // smooth factors, leaving the singular denominator at v' + i eps
  for (int j = 0; j < n; ++j)
    logv[j] = std::log(cplx(vgrid[j] - (shifted ? 0.0 : w0), eps));
  for (int i = 0; i < n; ++i) {
    const double v = shifted ? vgrid[i] + w0 : vgrid[i];
    if (v <= map.v_lo() || v >= map.v_hi()) continue;
    const double psi_v = map.Psi(v);
    if (psi_v == 0.0) continue;
    const double yi = map.binv(v);
    for (int j = 0; j < n; ++j) {
      const double vj = shifted ? vgrid[j] + w0 : vgrid[j];
      if (vj <= map.v_lo() || vj >= map.v_hi() || dB[j] == 0.0) {
        F[j] = 0.0;
        continue;
      }
      const double yj = shifted ? map.binv(vj) : yv[j];
      F[j] = eval_G(k, yi, yj) * dB[j] * g[j];
    }
    // central-difference F' against the log, trapezoid in v'
    cplx acc(0.0);
    for (int j = 1; j + 1 < n; ++j) {
      const cplx Fp = (F[j + 1] - F[j - 1]) / (2.0 * dv);
      acc += logv[j] * Fp * dv;
    }
    out[i] = -psi_v * acc;
  }
  return out;
}

ThetaField theta_transform(const ShearProfile& p, const CoordinateMap& map, int k,
                           const std::vector<cplx>& omega0,
                           const std::vector<double>& eps_schedule, int nv, int nw) {
  ThetaField th;
  th.k = k;
  th.nv = nv;
  th.nw = nw;
  const double v_lo = map.v_lo(), v_hi = map.v_hi();
  // w ranges over supp Psi = b([phi_lo, phi_hi]); v+w must land in the same
  // band, so v spans its difference set, padded 15% per side.
  const double w_lo = p.b(map.phi_support_lo()), w_hi = p.b(map.phi_support_hi());
  const double v_span_lo = w_lo - w_hi, v_span_hi = w_hi - w_lo;
  const double pad = 0.15 * (v_span_hi - v_span_lo);
  th.v0 = v_span_lo - pad;
  th.dv = (v_span_hi - v_span_lo + 2.0 * pad) / nv;
  const double wpad = 0.1 * (w_hi - w_lo);
  th.w0 = w_lo - wpad;
  th.dw = (w_hi - w_lo + 2.0 * wpad) / nw;

  th.values.assign(static_cast<size_t>(nv) * nw, cplx(0.0));
  for (int j = 0; j < nw; ++j) {
    const double w = th.w0 + j * th.dw;
    if (w <= v_lo || w >= v_hi) continue;
    const double psi_w = map.Psi(w);
    if (psi_w == 0.0) continue;
    const double y0 = map.binv(w);
    const LapDifference d = lap_difference(p, k, y0, omega0, eps_schedule);
    for (int i = 0; i < nv; ++i) {
      const double vw = th.v0 + i * th.dv + w;  // v + w
      if (vw <= v_lo || vw >= v_hi) continue;
      const double psi_vw = map.Psi(vw);
      if (psi_vw == 0.0) continue;
      th.values[static_cast<size_t>(i) * nw + j] =
          psi_vw * interp_uniform(d.limit, map.binv(vw)) * psi_w;
    }
  }
  th.ttilde = fourier_transform_2d(th.values, nv, nw, th.v0, th.dv, th.w0, th.dw);
  th.freq_v.resize(nv);
  th.freq_w.resize(nw);
  for (int m = 0; m < nv; ++m) th.freq_v[m] = fft_freq(m, nv, th.dv);
  for (int m = 0; m < nw; ++m) th.freq_w[m] = fft_freq(m, nw, th.dw);
  return th;
}

std::vector<cplx> theta_route_stream(const ThetaField& theta, double t,
                                     const std::vector<double>& vgrid) {
  std::vector<cplx> out(vgrid.size(), cplx(0.0));
  const cplx pref = -1.0 / (2.0 * M_PI * cplx(0.0, 1.0));
  for (size_t i = 0; i < vgrid.size(); ++i) {
    cplx acc(0.0);
    for (int j = 0; j < theta.nw; ++j) {
      const double w = theta.w0 + j * theta.dw;
      // interpolate Theta(v - w, w) linearly in the first argument
      const double x = (vgrid[i] - w - theta.v0) / theta.dv;
      const int i0 = static_cast<int>(std::floor(x));
      if (i0 < 0 || i0 + 1 >= theta.nv) continue;
      const double fr = x - i0;
      const cplx val = (1.0 - fr) * theta.values[static_cast<size_t>(i0) * theta.nw + j] +
                       fr * theta.values[static_cast<size_t>(i0 + 1) * theta.nw + j];
      const double phase = -theta.k * w * t;
      acc += cplx(std::cos(phase), std::sin(phase)) * val * theta.dw;
    }
    out[i] = pref * acc;
  }
  return out;
}

ThetaGevreyReport verify_theta_gevrey(const ThetaField& theta, const GevreyWeight& w,
                                      const CoordinateMap& map,
                                      const std::vector<cplx>& omega0,
                                      const GevreyWeight* w_data, double band_cap) {
  ThetaGevreyReport rep;
  const GevreyWeight& wd = w_data ? *w_data : w;
  // weighted norm of the initial pullback data f0(v) = omega0(binv(v))
  const int nf = 1024;
  const double v_lo = map.v_lo(), v_hi = map.v_hi();
  const double pad = 0.25 * (v_hi - v_lo);
  const double dv = (v_hi - v_lo + 2.0 * pad) / nf;
  std::vector<cplx> f0(nf, cplx(0.0));
  for (int i = 0; i < nf; ++i) {
    const double v = v_lo - pad + i * dv;
    if (v <= v_lo || v >= v_hi) continue;
    f0[i] = interp_uniform(omega0, map.binv(v));
  }
  const auto f0t = fourier_transform(f0, v_lo - pad, dv);
  double peak0 = 0.0;
  for (const auto& c : f0t) peak0 = std::max(peak0, std::abs(c));
  if (peak0 == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  const double dxi0 = 2.0 * M_PI / (nf * dv);
  double dnorm = 0.0;
  for (int m = 0; m < nf; ++m) {
    const double mag = std::abs(f0t[m]);
    if (mag < 1e-12 * peak0) continue;
    const double lw = wd.log_weight(static_cast<double>(theta.k), fft_freq(m, nf, dv));
    dnorm += std::exp(2.0 * lw) * mag * mag * dxi0;
  }
  rep.data_norm = std::sqrt(dnorm);

  double peak = 0.0;
  for (const auto& c : theta.ttilde) peak = std::max(peak, std::abs(c));
  const double floor = 1e-12 * peak;
  const double guard_v = std::min(0.4 * M_PI / theta.dv, band_cap);
  const double guard_w = std::min(0.4 * M_PI / theta.dw, band_cap);
  const double dxi = 2.0 * M_PI / (theta.nv * theta.dv);
  const double deta = 2.0 * M_PI / (theta.nw * theta.dw);
  double l2 = 0.0, sup = 0.0;
  for (int i = 0; i < theta.nv; ++i) {
    const double xi = theta.freq_v[i];
    if (std::abs(xi) > guard_v) continue;
    for (int j = 0; j < theta.nw; ++j) {
      const double eta = theta.freq_w[j];
      if (std::abs(eta) > guard_w) continue;
      const double mag = std::abs(theta.ttilde[static_cast<size_t>(i) * theta.nw + j]);
      if (mag < floor) continue;
      const double lw = w.log_weight(static_cast<double>(theta.k), eta);
      const double amp1 = (std::abs(theta.k) + std::abs(xi)) * std::exp(lw) * mag;
      l2 += amp1 * amp1 * dxi * deta;
      sup = std::max(sup, (std::abs(theta.k) + std::abs(xi)) * amp1);
    }
  }
  rep.ratio_l2 = std::sqrt(l2) / rep.data_norm;
  rep.ratio_sup = sup / rep.data_norm;
  return rep;
}

std::string ThetaGevreyReport::to_json() const {
  std::ostringstream os;
  os << "{\"ratio_l2\":" << ratio_l2 << ",\"ratio_sup\":" << ratio_sup
     << ",\"data_norm\":" << data_norm << ",\"vacuous\":" << (vacuous ? "true" : "false") << "}";
  return os.str();
}

ScanReport embedded_eigenvalue_scan(const ShearProfile& p, int kmax) {
  const CoordinateMap map = build_map(p);
  ScanReport rep;
  rep.min_sv = 1e300;
  const std::vector<double> y0s = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const std::vector<double> epss = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  for (int k = 1; k <= kmax; ++k) {
    for (double y0 : y0s) {
      double prev = -1.0;
      for (double eps : epss) {
        const OperatorProbe pr = operator_probe(p, map, k, y0, eps);
        if (pr.min_sv < rep.min_sv) {
          rep.min_sv = pr.min_sv;
          rep.argmin_k = k;
          rep.argmin_y0 = y0;
          rep.argmin_eps = eps;
        }
        if (prev >= 0.0 && eps <= 1.0 / 64)
          rep.max_eps_jump = std::max(rep.max_eps_jump, std::abs(pr.min_sv - prev));
        prev = pr.min_sv;
      }
    }
  }
  rep.pass = rep.min_sv >= 1e-3 && rep.max_eps_jump <= 0.2;
  return rep;
}

std::string ScanReport::to_json() const {
  std::ostringstream os;
  os << "{\"min_sv\":" << min_sv << ",\"argmin_k\":" << argmin_k << ",\"argmin_y0\":" << argmin_y0
     << ",\"argmin_eps\":" << argmin_eps << ",\"max_eps_jump\":" << max_eps_jump
     << ",\"pass\":" << (pass ? "true" : "false") << "}";
  return os.str();
}

}  // namespace damping
