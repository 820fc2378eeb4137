#include "damping/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace damping {

namespace {

double l2_norm(const std::vector<cplx>& f, double h) {
  double acc = 0.0;
  for (size_t j = 1; j + 1 < f.size(); ++j) acc += std::norm(f[j]);
  acc += 0.5 * (std::norm(f.front()) + std::norm(f.back()));
  return std::sqrt(acc * h);
}

// Thomas solve of the symmetric tridiagonal system for the interior values;
// diag = k^2 + 2/h^2, offdiag = -1/h^2.
void stream_interior(int k, const std::vector<cplx>& omega, std::vector<cplx>& psi) {
  const int n = static_cast<int>(omega.size()) - 1;
  const double h = 1.0 / n;
  const double off = -1.0 / (h * h);
  const double diag = static_cast<double>(k) * k + 2.0 / (h * h);
  const int m = n - 1;
  static thread_local std::vector<double> cp;
  static thread_local std::vector<cplx> dp;
  cp.assign(m, 0.0);
  dp.assign(m, cplx(0.0));
  cp[0] = off / diag;
  dp[0] = -omega[1] / diag;
  for (int i = 1; i < m; ++i) {
    const double denom = diag - off * cp[i - 1];
    cp[i] = off / denom;
    dp[i] = (-omega[i + 1] - off * dp[i - 1]) / denom;
  }
  psi.assign(n + 1, cplx(0.0));
  psi[m] = dp[m - 1];
  for (int i = m - 2; i >= 0; --i) psi[i + 1] = dp[i] - cp[i] * psi[i + 2];
}

std::vector<cplx> derivative(const std::vector<cplx>& f, double h) {
  const size_t n = f.size();
  std::vector<cplx> d(n);
  d[0] = (f[1] - f[0]) / h;
  for (size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  d[n - 1] = (f[n - 1] - f[n - 2]) / h;
  return d;
}

// 4-point Lagrange interpolation on the uniform unit grid.
cplx interp_uniform(const std::vector<cplx>& f, double x) {
  const int n = static_cast<int>(f.size()) - 1;
  const double h = 1.0 / n;
  double u = x / h;
  int j = static_cast<int>(std::floor(u)) - 1;
  j = std::clamp(j, 0, n - 3);
  const double t = u - j;
  // nodes j..j+3 with local coordinates 0..3
  const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return w0 * f[j] + w1 * f[j + 1] + w2 * f[j + 2] + w3 * f[j + 3];
}

}  // namespace

std::vector<cplx> solve_stream(int k, const std::vector<cplx>& omega) {
  if (k == 0) throw std::invalid_argument("solve_stream: k must be nonzero");
  if (omega.size() < 4) throw std::invalid_argument("solve_stream: grid too small");
  std::vector<cplx> psi;
  stream_interior(k, omega, psi);
  // algebraic residual on a deterministic interior sample
  const int n = static_cast<int>(omega.size()) - 1;
  const double h = 1.0 / n;
  double wmax = 0.0;
  for (const auto& w : omega) wmax = std::max(wmax, std::abs(w));
  if (wmax > 0.0) {
    double rmax = 0.0;
    for (int j = 1; j < n; j += std::max(1, n / 64)) {
      const cplx r = (static_cast<double>(k) * k) * psi[j] -
                     (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) / (h * h) + omega[j];
      rmax = std::max(rmax, std::abs(r));
    }
    if (rmax > 1e-8 * wmax) throw std::runtime_error("solve_stream: residual check failed");
  }
  return psi;
}

void step_mode(const ShearProfile& p, ModeField& state, double dt) {
  const int n = static_cast<int>(state.omega.size()) - 1;
  const double h = 1.0 / n;
  static thread_local std::vector<double> b, b2;
  // The tables depend only on the values that determine b, never on the
  // profile's identity: stack reuse can place a different profile at a
  // previously cached address.
  struct Key {
    bool couette;
    double amplitude, shape_a, theta0;
    int n;
    bool operator==(const Key&) const = default;
  };
  static thread_local Key cached{true, -1.0, -1.0, -1.0, -1};
  const Key key{p.is_couette(), p.amplitude(), p.shape_a(), p.theta0(), n};
  if (!(cached == key)) {
    b.resize(n + 1);
    b2.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      const Jet3 bj = p.jet(j * h);
      b[j] = bj.f;
      b2[j] = bj.f2;
    }
    cached = key;
  }
  double bmax = 0.0;
  for (double v : b) bmax = std::max(bmax, std::abs(v));
  if (dt * std::abs(state.k) * bmax > 0.5 + 1e-12)
    throw std::invalid_argument("step_mode: dt violates the CFL-like bound");

  const double k = state.k;
  auto rhs = [&](const std::vector<cplx>& om, std::vector<cplx>& out) {
    std::vector<cplx> psi;
    stream_interior(state.k, om, psi);
    out.resize(om.size());
    for (size_t j = 0; j < om.size(); ++j)
      out[j] = cplx(0.0, -k) * b[j] * om[j] + cplx(0.0, k) * b2[j] * psi[j];
  };
  const size_t m = state.omega.size();
  std::vector<cplx> k1, k2, k3, k4, tmp(m);
  rhs(state.omega, k1);
  for (size_t j = 0; j < m; ++j) tmp[j] = state.omega[j] + 0.5 * dt * k1[j];
  rhs(tmp, k2);
  for (size_t j = 0; j < m; ++j) tmp[j] = state.omega[j] + 0.5 * dt * k2[j];
  rhs(tmp, k3);
  for (size_t j = 0; j < m; ++j) tmp[j] = state.omega[j] + dt * k3[j];
  rhs(tmp, k4);
  for (size_t j = 0; j < m; ++j)
    state.omega[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  state.time += dt;
}

std::vector<cplx> gaussian_gevrey_bump(const ShearProfile& p, int n, double center,
                                       double width, double a) {
  const double t1 = p.theta1();
  std::vector<cplx> w0(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double y = static_cast<double>(j) / n;
    const double x = (y - t1) / (1.0 - 2.0 * t1);
    const double g = std::exp(-std::pow((y - center) / width, 2));
    w0[j] = g * cutoff_psi(a, x);
  }
  return w0;
}

std::vector<Trajectory> evolve(const ShearProfile& p, const std::vector<cplx>& omega0,
                               const std::vector<int>& kset, double T, double dt,
                               double snap_every) {
  const int n = static_cast<int>(omega0.size()) - 1;
  const double h = 1.0 / n;
  // initial-data support gate
  for (int j = 0; j <= n; ++j) {
    const double y = j * h;
    if ((y < p.theta1() - h || y > 1.0 - p.theta1() + h) && std::abs(omega0[j]) > 1e-14)
      throw std::invalid_argument("evolve: omega0 leaves [theta1, 1-theta1]");
  }
  double bmax = 0.0;
  for (int j = 0; j <= n; ++j) bmax = std::max(bmax, std::abs(p.b(j * h)));

  std::vector<Trajectory> out;
  for (int k : kset) {
    double step = dt;
    if (step <= 0.0) step = 0.5 / (std::abs(k) * bmax);
    // land snapshots exactly: make snap_every an integer multiple of dt
    const int per = std::max(1, static_cast<int>(std::ceil(snap_every / step)));
    step = snap_every / per;

    Trajectory traj;
    traj.k = k;
    traj.n = n;
    traj.dt = step;
    ModeField state{k, 0.0, omega0};
    auto record = [&](double t) {
      Snapshot s;
      s.t = t;
      s.omega = state.omega;
      s.psi = solve_stream(k, state.omega);
      s.ux = derivative(s.psi, h);
      for (auto& v : s.ux) v = -v;
      s.uy.resize(s.psi.size());
      for (size_t j = 0; j < s.psi.size(); ++j) s.uy[j] = cplx(0.0, static_cast<double>(k)) * s.psi[j];
      s.psi_norm = l2_norm(s.psi, h);
      s.ux_norm = l2_norm(s.ux, h);
      s.uy_norm = l2_norm(s.uy, h);
      traj.snaps.push_back(std::move(s));
    };
    record(0.0);
    const int nsnaps = static_cast<int>(std::round(T / snap_every));
    for (int sidx = 1; sidx <= nsnaps; ++sidx) {
      for (int q = 0; q < per; ++q) step_mode(p, state, step);
      state.time = sidx * snap_every;  // suppress roundoff drift in the clock
      record(state.time);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

PullbackSlice pullback(const CoordinateMap& map, int k, const Snapshot& snap, int nv) {
  const ShearProfile& p = map.profile();
  const int n = static_cast<int>(snap.omega.size()) - 1;
  const double h = 1.0 / n;
  // unwind the transport phase; the remainder is smooth in y
  std::vector<cplx> g(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double phase = k * p.b(j * h) * snap.t;
    g[j] = snap.omega[j] * cplx(std::cos(phase), std::sin(phase));
  }
  PullbackSlice out;
  out.t = snap.t;
  const double v_lo = map.v_lo(), v_hi = map.v_hi();
  const double pad = 0.25 * (v_hi - v_lo);
  out.v0 = v_lo - pad;
  out.dv = (v_hi - v_lo + 2.0 * pad) / nv;
  out.f.assign(nv, cplx(0.0));
  for (int i = 0; i < nv; ++i) {
    const double v = out.v0 + i * out.dv;
    if (v <= v_lo || v >= v_hi) continue;
    out.f[i] = interp_uniform(g, map.binv(v));
  }
  out.ftilde = fourier_transform(out.f, out.v0, out.dv);
  out.freq.resize(nv);
  for (int m = 0; m < nv; ++m) out.freq[m] = fft_freq(m, nv, out.dv);
  return out;
}

namespace {

// Weighted L^2 of a transform difference with noise-floor truncation: the
// weight grows super-polynomially, so bins below 1e-12 of the peak are
// treated as exact zeros rather than amplified FFT noise.
double weighted_residual(const PullbackSlice& a, const std::vector<cplx>& ref, int k,
                         const GevreyWeight& w) {
  double peak = 0.0;
  for (size_t m = 0; m < a.ftilde.size(); ++m)
    peak = std::max(peak, std::max(std::abs(a.ftilde[m]), std::abs(ref[m])));
  const double floor = 1e-12 * peak;
  double acc = 0.0;
  const double dxi = 2.0 * M_PI / (a.ftilde.size() * a.dv);
  for (size_t m = 0; m < a.ftilde.size(); ++m) {
    const cplx d = a.ftilde[m] - ref[m];
    if (std::abs(d) < floor) continue;
    const double lw = w.log_weight(static_cast<double>(k), a.freq[m]);
    acc += std::exp(2.0 * lw) * std::norm(d) * dxi;
  }
  return std::sqrt(acc);
}

}  // namespace

std::vector<std::pair<double, double>> gevrey_norm_history(const CoordinateMap& map,
                                                           const Trajectory& traj,
                                                           const GevreyWeight& w, int nv) {
  std::vector<std::pair<double, double>> out;
  std::vector<cplx> zero;
  for (const auto& s : traj.snaps) {
    const PullbackSlice ps = pullback(map, traj.k, s, nv);
    zero.assign(ps.ftilde.size(), cplx(0.0));
    out.emplace_back(s.t, weighted_residual(ps, zero, traj.k, w));
  }
  return out;
}

ScatteringFit scattering_fit(const CoordinateMap& map, const Trajectory& traj,
                             const GevreyWeight& w_prime, int nv) {
  ScatteringFit fit;
  const double T = traj.snaps.back().t;
  fit.fit_lo = 12.0;
  fit.fit_hi = 0.5 * T;
  // locate snapshots at T and T/2
  const Snapshot* sT = nullptr;
  const Snapshot* sH = nullptr;
  for (const auto& s : traj.snaps) {
    if (std::abs(s.t - T) < 1e-9) sT = &s;
    if (std::abs(s.t - 0.5 * T) < 1e-9) sH = &s;
  }
  if (!sT || !sH || fit.fit_hi <= fit.fit_lo + 4.0)
    throw std::invalid_argument("scattering_fit: need snapshots at T and T/2, T >= 33");
  const PullbackSlice pT = pullback(map, traj.k, *sT, nv);
  const PullbackSlice pH = pullback(map, traj.k, *sH, nv);
  std::vector<cplx> finf(pT.ftilde.size());
  for (size_t m = 0; m < finf.size(); ++m) finf[m] = 2.0 * pT.ftilde[m] - pH.ftilde[m];
  fit.f_inf.resize(pT.f.size());
  for (size_t m = 0; m < fit.f_inf.size(); ++m) fit.f_inf[m] = 2.0 * pT.f[m] - pH.f[m];

  std::vector<double> lt, lr, lr_last;
  bool monotone = true;
  double prev = 1e300;
  for (const auto& s : traj.snaps) {
    if (s.t < fit.fit_lo - 1e-9 || s.t > fit.fit_hi + 1e-9) continue;
    const PullbackSlice ps = pullback(map, traj.k, s, nv);
    const double r = weighted_residual(ps, finf, traj.k, w_prime);
    const double rl = weighted_residual(ps, pT.ftilde, traj.k, w_prime);
    if (r <= 0.0) continue;
    if (r > prev) monotone = false;
    prev = r;
    lt.push_back(std::log(s.t));
    lr.push_back(std::log(r));
    lr_last.push_back(std::log(std::max(rl, 1e-300)));
  }
  if (lt.size() < 8) throw std::invalid_argument("scattering_fit: too few snapshots in window");
  auto slope = [&](const std::vector<double>& ys) {
    const int m = static_cast<int>(lt.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
      sx += lt[i];
      sy += ys[i];
      sxx += lt[i] * lt[i];
      sxy += lt[i] * ys[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  fit.rate = slope(lr);
  fit.rate_lastsnap = slope(lr_last);
  fit.reliable = monotone;
  return fit;
}

OrrExponents orr_exponents(const Trajectory& traj, double t_lo, double t_hi) {
  std::vector<double> lt, lp, lx, ly;
  int with_t5 = 0;
  for (const auto& s : traj.snaps) {
    if (s.t >= 5.0) ++with_t5;
    if (s.t < t_lo - 1e-9 || s.t > t_hi + 1e-9) continue;
    if (s.psi_norm <= 0.0 || s.ux_norm <= 0.0 || s.uy_norm <= 0.0) continue;
    lt.push_back(std::log(s.t));
    lp.push_back(std::log(s.psi_norm));
    lx.push_back(std::log(s.ux_norm));
    ly.push_back(std::log(s.uy_norm));
  }
  if (with_t5 < 8 || lt.size() < 4)
    throw std::invalid_argument("orr_exponents: too few snapshots (need >= 8 with t >= 5)");
  auto slope = [&](const std::vector<double>& ys) {
    const int m = static_cast<int>(lt.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
      sx += lt[i];
      sy += ys[i];
      sxx += lt[i] * lt[i];
      sxy += lt[i] * ys[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  OrrExponents e;
  e.psi = slope(lp);
  e.ux = slope(lx);
  e.uy = slope(ly);
  e.fit_lo = t_lo;
  e.fit_hi = t_hi;
  return e;
}

}  // namespace damping
