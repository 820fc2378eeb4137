#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "damping/bracket.hpp"
#include "damping/fft.hpp"
#include "damping/gevrey.hpp"

using namespace damping;

TEST_CASE("frozen weight oracle at (lambda, s, k, eta) = (0.2, 0.5, 1, 0)") {
  // exp(0.2 * 2^{1/4}) = 1.26850795...
  const GevreyWeight w{0.2, 0.5, std::nullopt};
  CHECK(w.weight(1.0, 0.0) == doctest::Approx(1.2685080206789899).epsilon(1e-10));
  CHECK(w.log_weight(1.0, 0.0) == doctest::Approx(0.2 * std::pow(2.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("bracket is the Japanese norm in (1, k, eta)") {
  CHECK(bracket(0.0) == doctest::Approx(1.0));
  CHECK(bracket(3.0, 4.0) == doctest::Approx(std::sqrt(26.0)).epsilon(1e-14));
}

TEST_CASE("truncated weight is constant beyond rho and below the full weight") {
  GevreyWeight full{0.3, 0.5, std::nullopt};
  GevreyWeight trunc{0.3, 0.5, 50.0};
  CHECK(trunc.log_weight(1.0, 100.0) == doctest::Approx(trunc.log_weight(1.0, 5000.0)).epsilon(1e-13));
  for (double eta : {0.0, 3.0, 20.0, 49.0, 80.0, 1e4}) {
    CHECK(trunc.log_weight(1.0, eta) <= full.log_weight(1.0, eta) + 1e-13);
  }
  // Pointwise increase toward the full weight as rho grows.
  GevreyWeight trunc2{0.3, 0.5, 500.0};
  for (double eta : {0.0, 20.0, 300.0, 1e4}) {
    CHECK(trunc.log_weight(1.0, eta) <= trunc2.log_weight(1.0, eta) + 1e-13);
  }
}

TEST_CASE("weighted norm of a resolved Gaussian mode matches quadrature") {
  // Unweighted (lambda = 0): ||f||^2 = int e^{-2 xi^2} dxi = sqrt(pi/2).
  SpectralField f;
  f.ks = {1};
  f.xi0 = -12.0;
  f.dxi = 1.0 / 64.0;
  const int m = (int)std::lround(24.0 / f.dxi) + 1;
  f.modes.resize(1);
  for (int i = 0; i < m; ++i) {
    const double xi = f.xi0 + i * f.dxi;
    f.modes[0].push_back(cplx(std::exp(-xi * xi), 0.0));
  }
  const GevreyWeight w0{0.0, 0.5, std::nullopt};
  CHECK(gevrey_norm(f, w0) ==
        doctest::Approx(std::sqrt(std::sqrt(3.14159265358979323846 / 2.0))).epsilon(1e-8));
  // A positive weight only increases the norm.
  const GevreyWeight w{0.2, 0.5, std::nullopt};
  CHECK(gevrey_norm(f, w) > gevrey_norm(f, w0));
}

TEST_CASE("unresolved tails are rejected, not silently integrated") {
  SpectralField f;
  f.ks = {1};
  f.xi0 = -4.0;
  f.dxi = 0.125;
  f.modes.resize(1);
  for (int i = 0; i <= 64; ++i) f.modes[0].push_back(cplx(1.0, 0.0));  // flat, no decay
  const GevreyWeight w{0.2, 0.5, std::nullopt};
  CHECK_THROWS(gevrey_norm(f, w));
}

TEST_CASE("cutoff transform decay classes a/(a+1)") {
  const CutoffDecayReport r1 = verify_cutoff_decay(1.0, 4096);
  CHECK(r1.pass);
  CHECK(r1.mu_fit > 0.0);
  const CutoffDecayReport rp = verify_cutoff_decay(1.0, 8192, /*plateau=*/true);
  CHECK(rp.pass);
}

TEST_CASE("randomized weight inequalities: no violations, deterministic seed") {
  const GevreyWeight w{0.2, 0.5, std::nullopt};
  const PropertyReport a = verify_weight_inequalities(w, 10000);
  CHECK(a.pass);
  CHECK(a.violations == 0);
  CHECK(a.first_witness.empty());
  const PropertyReport b = verify_weight_inequalities(w, 10000);
  CHECK(a.C_p32 == b.C_p32);  // same seed, same draw sequence
}
