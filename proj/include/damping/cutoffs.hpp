#pragma once

#include "damping/jet.hpp"

namespace damping {

// Gevrey cutoff psi_a(x) = exp(-[x^-a + (1-x)^-a]) on (0,1), zero outside.
// Its transform decays like exp(-mu |xi|^{a/(a+1)}).
inline Jet3 cutoff_psi_jet(double a, double x) {
  if (x <= 0.0 || x >= 1.0) return Jet3::constant(0.0);
  // Deep in the tails the exponent underflows; return an exact zero jet
  // rather than denormal noise.
  const Jet3 xj = Jet3::variable(x);
  const Jet3 expo = -(pow(xj, -a) + pow(1.0 - xj, -a));
  if (expo.f < -700.0) return Jet3::constant(0.0);
  return exp(expo);
}

inline double cutoff_psi(double a, double x) { return cutoff_psi_jet(a, x).f; }

// Exponent jet E(x) = -(x^-a + (1-x)^-a) of the unit cutoff; only defined
// inside (0,1).
inline Jet3 cutoff_exponent_jet(double a, double x) {
  const Jet3 xj = Jet3::variable(x);
  return -(pow(xj, -a) + pow(1.0 - xj, -a));
}

// Plateau cutoff psi'_{a,rho} = psi_a(x) / (psi_a(x) + psi_a(x-rho) +
// psi_a(x+rho)): supported in [0,1], identically 1 on [1-rho,rho] for rho in
// [9/10, 1). Evaluated through exponent differences so the transition zones
// survive where the individual psi_a underflow.
inline Jet3 cutoff_plateau_jet(double a, double rho, double x) {
  if (x <= 0.0 || x >= 1.0) return Jet3::constant(0.0);
  if (x >= 1.0 - rho && x <= rho) return Jet3::constant(1.0);
  const Jet3 ex = cutoff_exponent_jet(a, x);
  Jet3 den = Jet3::constant(1.0);
  for (double shift : {-rho, rho}) {
    const double xs = x + shift;
    if (xs <= 0.0 || xs >= 1.0) continue;
    const Jet3 diff = cutoff_exponent_jet(a, xs) - ex;
    if (diff.f > 700.0) return Jet3::constant(0.0);  // the shifted copy dominates
    if (diff.f < -700.0) continue;                   // this copy is negligible
    den = den + exp(diff);
  }
  return Jet3::constant(1.0) / den;
}

inline double cutoff_plateau(double a, double rho, double x) {
  return cutoff_plateau_jet(a, rho, x).f;
}

// Gevrey smoothstep S(x) = g(x) / (g(x) + g(1-x)) with g(x) = e^{-x^-a}:
// 0 for x <= 0, 1 for x >= 1, same flat-vanishing class as psi_a at the
// endpoints. Evaluated through the exponent difference x^-a - (1-x)^-a, so
// the representable transition spans most of (0,1) even for large a.
inline Jet3 smoothstep_jet(double a, double x) {
  if (x <= 0.0) return Jet3::constant(0.0);
  if (x >= 1.0) return Jet3::constant(1.0);
  const Jet3 xj = Jet3::variable(x);
  const Jet3 delta = pow(xj, -a) - pow(1.0 - xj, -a);
  if (delta.f > 700.0) return Jet3::constant(0.0);
  if (delta.f < -700.0) return Jet3::constant(1.0);
  return Jet3::constant(1.0) / (1.0 + exp(delta));
}

inline double smoothstep(double a, double x) { return smoothstep_jet(a, x).f; }

// Affine rescale helper: evaluates a unit-interval cutoff jet on [lo, hi].
template <typename F>
Jet3 rescaled_jet(F&& unit_jet, double lo, double hi, double y) {
  const double scale = 1.0 / (hi - lo);
  Jet3 j = unit_jet((y - lo) * scale);
  j.f1 *= scale;
  j.f2 *= scale * scale;
  j.f3 *= scale * scale * scale;
  return j;
}

}  // namespace damping
