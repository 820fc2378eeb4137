#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "damping/evolution.hpp"
#include "damping/greens.hpp"
#include "damping/profiles.hpp"
#include "damping/spectral.hpp"

using namespace damping;

namespace {
double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}
}  // namespace

TEST_CASE("conjugation symmetry of the two absorption branches") {
  const ShearProfile p = make_bump_profile(0.05, 3.0, 0.08, 0.025);
  const int n = 512;
  const auto omega0 = gaussian_gevrey_bump(p, n);  // real data
  const auto minus = solve_eigenfunction(p, 1, 0.4, 1.0 / 32, -1, omega0);
  const auto plus = solve_eigenfunction(p, 1, 0.4, 1.0 / 32, +1, omega0);
  double worst = 0.0;
  for (int j = 0; j <= n; ++j)
    worst = std::max(worst, std::abs(minus.psi[j] - std::conj(plus.psi[j])));
  CHECK(worst < 1e-12);
  CHECK(minus.residual < 1e-8);
  CHECK(plus.residual_h0 < 1e-2);  // integral reformulation agrees
}

TEST_CASE("eps below the critical-layer resolution floor is rejected") {
  const ShearProfile p = make_couette();
  const auto omega0 = gaussian_gevrey_bump(p, 128);
  CHECK_THROWS(solve_eigenfunction(p, 1, 0.5, 1e-4, +1, omega0));
}

TEST_CASE("branch difference extrapolation converges for interior y0") {
  const ShearProfile p = make_couette();
  const auto omega0 = gaussian_gevrey_bump(p, 1024);
  const std::vector<double> eps = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const LapDifference two = lap_difference(p, 1, 0.5, omega0, eps);
  CHECK(two.converged);
  CHECK(two.norm > 0.0);
  const LapDifference three = lap_difference(p, 1, 0.5, omega0, eps, /*odd_elimination=*/true);
  CHECK(three.converged);
  CHECK(rel_l2(three.limit, two.limit) < 5e-3);  // both approximate the same limit
}

TEST_CASE("representation formula matches the elliptic solve at t = 0") {
  const ShearProfile p = make_couette();
  const int n = 1024, k = 1;
  const auto omega0 = gaussian_gevrey_bump(p, n);
  const std::vector<double> eps = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto psi_rep = assemble_stream(p, 0.0, k, omega0, eps);
  const auto psi_ell = solve_stream(k, omega0);
  CHECK(rel_l2(psi_rep, psi_ell) < 1e-3);
}

TEST_CASE("Couette has a vanishing compact part: ||T|| ~ 0, min_sv ~ 1") {
  const ShearProfile p = make_couette();
  const CoordinateMap map = build_map(p);
  const OperatorProbe probe = operator_probe(p, map, 1, 0.5, 1.0 / 32, 128);
  CHECK(probe.Tnorm < 1e-12);
  CHECK(probe.min_sv == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bump-profile operator norm decays in k and I+T stays invertible") {
  const ShearProfile p = make_bump_profile(0.05, 3.0, 0.08, 0.025);
  const CoordinateMap map = build_map(p);
  const OperatorProbe a = operator_probe(p, map, 1, 0.5, 1.0 / 32, 128);
  const OperatorProbe b = operator_probe(p, map, 8, 0.5, 1.0 / 32, 128);
  CHECK(a.Tnorm > 0.0);
  CHECK(b.Tnorm < a.Tnorm);
  CHECK(a.min_sv > 1e-3);
  CHECK(b.min_sv > 1e-3);
}

TEST_CASE("log-kernel quadrature matches direct quadrature at moderate eps") {
  // At eps = 0.1 the direct Riemann sum of g/(v'-w+i eps) is accurate, so
  // the integrated-by-parts form must agree with it.
  const ShearProfile p = make_bump_profile(0.05, 3.0, 0.08, 0.025);
  const CoordinateMap map = build_map(p);
  const int m = 512;
  const double lo = map.v_lo(), hi = map.v_hi();
  const double dv = (hi - lo) / (m - 1);
  std::vector<double> vgrid(m), yv(m), dB(m);
  std::vector<cplx> g(m);
  for (int i = 0; i < m; ++i) {
    vgrid[i] = lo + i * dv;
    yv[i] = map.binv(vgrid[i]);
    dB[i] = map.dB_dv(vgrid[i]);
    const double u = (vgrid[i] - lo) / (hi - lo);
    g[i] = std::exp(-20.0 * (u - 0.5) * (u - 0.5));
  }
  const double w0 = 0.5 * (lo + hi), eps = 0.1;
  const auto ibp = apply_S(map, 1, w0, eps, g, vgrid);
  std::vector<cplx> direct(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (map.Psi(vgrid[i]) == 0.0) continue;
    cplx acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double w = (j == 0 || j == m - 1) ? 0.5 : 1.0;  // trapezoid
      acc += w * eval_G(1, yv[i], yv[j]) * dB[j] * g[j] / cplx(vgrid[j] - w0, eps) * dv;
    }
    direct[i] = map.Psi(vgrid[i]) * acc;
  }
  CHECK(rel_l2(ibp, direct) < 5e-3);
}

TEST_CASE("Theta field reconstructs the localized stream function at t = 0") {
  const ShearProfile p = make_couette();
  const CoordinateMap map = build_map(p);
  const int n = 1024, k = 1;
  const auto omega0 = gaussian_gevrey_bump(p, n);
  const std::vector<double> eps = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const ThetaField theta = theta_transform(p, map, k, omega0, eps, 256, 128);
  std::vector<double> vgrid;
  std::vector<cplx> ref;
  const auto psi_ell = solve_stream(k, omega0);
  for (int j = 0; j <= n; j += 8) {
    const double v = p.b((double)j / n);
    vgrid.push_back(v);
    ref.push_back(map.Psi(v) * psi_ell[j]);
  }
  const auto rec = theta_route_stream(theta, 0.0, vgrid);
  CHECK(rel_l2(rec, ref) < 2e-2);
}

TEST_CASE("embedded-eigenvalue scan passes on Couette") {
  const ScanReport rep = embedded_eigenvalue_scan(make_couette(), 2);
  CHECK(rep.pass);
  CHECK(rep.min_sv >= 1e-3);
  CHECK(rep.to_json().find("min_sv") != std::string::npos);
}
