#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "damping/greens.hpp"
#include "damping/profiles.hpp"

using namespace damping;

TEST_CASE("frozen point values of the channel kernel") {
  // sinh(1/2)^2 / sinh(1) = tanh(1/2)/2 = 0.23105857863...
  CHECK(eval_G(1, 0.5, 0.5) == doctest::Approx(0.2310585786300049).epsilon(1e-12));
  // d2/dydz branch off the diagonal at (0.2, 0.8), k=1.
  CHECK(eval_Gprime(1, 0.2, 0.8) == doctest::Approx(-0.8854111036876717).epsilon(1e-10));
}

TEST_CASE("kernel agrees with the naive sinh formula at small k") {
  for (int k : {1, 2, 5}) {
    for (double y : {0.1, 0.3, 0.7}) {
      for (double z : {0.2, 0.5, 0.9}) {
        const double lo = std::min(y, z), hi = std::max(y, z);
        const double ref = std::sinh(k * lo) * std::sinh(k * (1.0 - hi)) / (k * std::sinh((double)k));
        CHECK(eval_G(k, y, z) == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("kernel symmetry, boundary values, large-k stability") {
  CHECK(eval_G(3, 0.2, 0.7) == doctest::Approx(eval_G(3, 0.7, 0.2)).epsilon(1e-14));
  CHECK(eval_G(4, 0.0, 0.5) == 0.0);
  CHECK(eval_G(4, 0.5, 1.0) == 0.0);
  // The sinh form overflows near k ~ 710; the exponential form must not.
  const double g = eval_G(2000, 0.5, 0.5);
  CHECK(std::isfinite(g));
  CHECK(g == doctest::Approx(1.0 / 4000.0).epsilon(1e-6));  // ~ 1/(2k) on the diagonal
  CHECK(std::isfinite(eval_Gprime(2000, 0.3, 0.31)));
}

static double green_identity_residual(int k, int n) {
  // u(y) = sin(pi y) solves (k^2 - d^2) u = (k^2 + pi^2) sin(pi y);
  // check sup_y |int G_k(y,z) g(z) dz - u(y)| with the quadrature split at
  // the kink z = y (composite Simpson on each side).
  const double pi = 3.14159265358979323846;
  double worst = 0.0;
  for (double y : {0.125, 0.37, 0.5, 0.81}) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double a = side == 0 ? 0.0 : y, b = side == 0 ? y : 1.0;
      const double h = (b - a) / (2 * n);
      double acc = 0.0;
      for (int i = 0; i <= 2 * n; ++i) {
        const double z = a + i * h;
        const double w = (i == 0 || i == 2 * n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * eval_G(k, y, z) * (k * k + pi * pi) * std::sin(pi * z);
      }
      total += acc * h / 3.0;
    }
    worst = std::max(worst, std::abs(total - std::sin(pi * y)));
  }
  return worst;
}

TEST_CASE("Green identity residual converges below 1e-8") {
  CHECK(green_identity_residual(1, 400) < 1e-8);
  CHECK(green_identity_residual(4, 400) < 1e-8);
}

TEST_CASE("localized kernel transform decays in the guard band") {
  const CoordinateMap map = build_map(make_couette());
  const KernelSpectrum sp = localized_kernel(1, map, 256);
  CHECK(sp.n == 256);
  CHECK(sp.box_lo < 0.0);
  CHECK(sp.box_hi > 1.0);
  const DecayReport rep = verify_kernel_fourier_decay(sp, 0.5);
  CHECK(rep.pass);
  CHECK(rep.delta_fit > 0.0);
  CHECK(rep.to_json().find("delta_fit") != std::string::npos);
}

TEST_CASE("scaled L1/L2 kernel bounds hold with one constant") {
  const BoundReport rep = verify_kernel_bounds(8);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio <= 100.0);
}
