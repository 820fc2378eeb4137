#pragma once

#include <string>
#include <vector>

#include "damping/jet.hpp"

namespace damping {

// Monotone shear profile b : [0,1] -> R with analytic derivatives.
// b'' vanishes identically on the collars [0,theta0] and [1-theta0,1],
// and theta1 in (0,theta0) bounds the support of initial data.
class ShearProfile {
 public:
  // Couette: b(y) = y.
  static ShearProfile couette(double theta0, double theta1, double s);
  // Bump: b''(y) = amplitude * chi(y) with chi a Gevrey bump of unit height
  // supported in [theta0, 1-theta0]; b' = 1 + amplitude * int chi >= 1.
  static ShearProfile bump(double amplitude, double a, double theta0, double theta1, double s);

  const std::string& name() const { return name_; }
  double theta0() const { return theta0_; }
  double theta1() const { return theta1_; }
  double s() const { return s_; }
  double amplitude() const { return amplitude_; }
  double shape_a() const { return shape_a_; }
  bool is_couette() const { return couette_; }

  Jet3 jet(double y) const;  // (b, b', b'', b''')
  double b(double y) const { return jet(y).f; }
  double b1(double y) const { return jet(y).f1; }
  double b2(double y) const { return jet(y).f2; }
  double b3(double y) const { return jet(y).f3; }

  // 2048 Chebyshev-distributed reference points in [0,1].
  const std::vector<double>& grid() const { return grid_; }

 private:
  ShearProfile() = default;
  Jet3 chi_jet(double y) const;  // unit-height bump shape of b''/amplitude
  double chi_antideriv(double y) const;         // int_0^y chi
  double chi_antideriv_second(double y) const;  // int_0^y int_0^tau chi

  std::string name_;
  bool couette_ = true;
  double theta0_ = 0.05, theta1_ = 0.025, s_ = 0.5;
  double amplitude_ = 0.0, shape_a_ = 0.0;
  double shape_c_ = 0.25;  // flattening exponent of the bump shape
  std::vector<double> grid_;
  // Precomputed antiderivatives of chi on a fine uniform grid.
  std::vector<double> integ1_, integ2_;
  double fine_h_ = 0.0;
};

// make_* constructors with the canonical parameters.
ShearProfile make_couette();
ShearProfile make_bump_profile(double amplitude, double a, double theta0, double theta1,
                               double s = 0.5, bool require_remark12 = false);

struct AssumptionCheck {
  std::string condition;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool pass = false;
  std::string first_violation;  // empty when pass
  std::string to_json() const;
};

// Numerical verification of the profile hypotheses: monotonicity band,
// collar vanishing of b'', the weighted-transform integral bound, and the
// sufficient spectral condition (min b' >= 1, max |b'''| < 1). The latter is
// reported but not folded into the overall pass flag.
AssumptionReport check_assumptions(const ShearProfile& p, double s, double lambda);

// Coordinate map v = b(y) with localizer Psi(v) = phi(b^{ -1}(v)).
class CoordinateMap {
 public:
  explicit CoordinateMap(const ShearProfile& p);

  const ShearProfile& profile() const { return profile_; }
  double v_lo() const { return v_lo_; }
  double v_hi() const { return v_hi_; }

  double binv(double v) const;       // residual |b(binv(v)) - v| <= 1e-12
  double B(double v) const;          // b'(b^{-1}(v))
  double dB_dv(double v) const;      // b''(y)/b'(y) at y = b^{-1}(v)
  Jet3 phi_jet(double y) const;      // y-space cutoff phi
  double phi(double y) const { return phi_jet(y).f; }
  double Psi(double v) const;
  // Support and plateau of phi in y.
  double phi_support_lo() const { return phi_lo_; }
  double phi_support_hi() const { return phi_hi_; }

 private:
  ShearProfile profile_;
  double v_lo_ = 0.0, v_hi_ = 1.0;
  double phi_lo_ = 0.0, phi_hi_ = 1.0, phi_a_ = 3.0, phi_margin_ = 0.0;
};

CoordinateMap build_map(const ShearProfile& p);

}  // namespace damping
