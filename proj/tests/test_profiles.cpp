#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "damping/cutoffs.hpp"
#include "damping/jet.hpp"
#include "damping/profiles.hpp"

using namespace damping;

TEST_CASE("jet arithmetic matches finite differences on a composite") {
  auto f = [](double x) {
    const Jet3 xj = Jet3::variable(x);
    return exp(-(pow(xj, -2.0) + pow(1.0 - xj, -1.0)));
  };
  const double x = 0.37, h = 1e-5;
  const Jet3 j = f(x);
  const double d1 = (f(x + h).f - f(x - h).f) / (2 * h);
  const double d2 = (f(x + h).f - 2 * j.f + f(x - h).f) / (h * h);
  CHECK(j.f1 == doctest::Approx(d1).epsilon(1e-6));
  CHECK(j.f2 == doctest::Approx(d2).epsilon(1e-4));
}

TEST_CASE("unit cutoff oracle: psi_1(1/2) = e^{-4}") {
  CHECK(cutoff_psi(1.0, 0.5) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
  CHECK(cutoff_psi(1.0, 0.0) == 0.0);
  CHECK(cutoff_psi(1.0, 1.0) == 0.0);
  CHECK(cutoff_psi(1.0, 1e-9) == 0.0);  // underflow guard, not denormal noise
}

TEST_CASE("plateau cutoff is 1 on the plateau and supported in (0,1)") {
  const double a = 3.0, rho = 0.95;
  CHECK(cutoff_plateau(a, rho, 0.5) == 1.0);
  CHECK(cutoff_plateau(a, rho, 0.06) == 1.0);
  CHECK(cutoff_plateau(a, rho, -0.01) == 0.0);
  CHECK(cutoff_plateau(a, rho, 1.01) == 0.0);
  // Transition zone centered at (1+rho)/2: exactly 1/2 there by symmetry,
  // monotone through it.
  CHECK(cutoff_plateau(a, rho, 0.975) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cutoff_plateau(a, rho, 0.97495) >= 0.5);
  const double below = cutoff_plateau(a, rho, 0.97502);
  CHECK(below > 0.0);
  CHECK(below < 0.5);
}

TEST_CASE("couette profile is the identity shear") {
  const ShearProfile p = make_couette();
  for (double y : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const Jet3 j = p.jet(y);
    CHECK(j.f == doctest::Approx(y).epsilon(1e-14));
    CHECK(j.f1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j.f2 == 0.0);
    CHECK(j.f3 == 0.0);
  }
}

TEST_CASE("bump profile: convex, collar-flat, monotone") {
  const ShearProfile p = make_bump_profile(0.05, 3.0, 0.08, 0.025);
  CHECK(p.b(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  // b'' = amplitude * chi >= 0 and vanishes on the collars.
  CHECK(p.b2(0.04) == 0.0);
  CHECK(p.b2(0.96) == 0.0);
  CHECK(p.b2(0.5) > 0.0);
  double prev = p.b(0.0);
  for (int i = 1; i <= 200; ++i) {
    const double y = i / 200.0;
    CHECK(p.b(y) > prev);
    CHECK(p.b1(y) >= 1.0 - 1e-12);
    prev = p.b(y);
  }
  // Consistency of the jet: b' via finite differences of b.
  const double h = 1e-6;
  CHECK(p.b1(0.4) == doctest::Approx((p.b(0.4 + h) - p.b(0.4 - h)) / (2 * h)).epsilon(1e-6));
  CHECK(p.b2(0.4) == doctest::Approx((p.b1(0.4 + h) - p.b1(0.4 - h)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("profile hypothesis report passes for both canonical profiles") {
  const AssumptionReport rc = check_assumptions(make_couette(), 0.5, 0.2);
  CHECK(rc.pass);
  const AssumptionReport rb = check_assumptions(make_bump_profile(0.05, 3.0, 0.08, 0.025), 0.5, 0.2);
  CHECK(rb.pass);
  CHECK(rb.to_json().find("\"pass\"") != std::string::npos);
}

TEST_CASE("coordinate map inverts the profile and carries the plateau localizer") {
  const ShearProfile p = make_bump_profile(0.05, 3.0, 0.08, 0.025);
  const CoordinateMap map = build_map(p);
  for (double v = map.v_lo() + 1e-6; v < map.v_hi(); v += (map.v_hi() - map.v_lo()) / 17) {
    const double y = map.binv(v);
    CHECK(p.b(y) == doctest::Approx(v).epsilon(1e-10));
    CHECK(map.B(v) == doctest::Approx(p.b1(y)).epsilon(1e-10));
    CHECK(map.dB_dv(v) == doctest::Approx(p.b2(y) / p.b1(y)).epsilon(1e-8));
  }
  // Psi = phi o binv is 1 where phi is 1; phi covers the data band.
  CHECK(map.phi(0.5) == 1.0);
  CHECK(map.Psi(p.b(0.5)) == 1.0);
  CHECK(map.phi(p.theta1()) == 1.0);
  CHECK(map.phi(1.0 - p.theta1()) == 1.0);
}
