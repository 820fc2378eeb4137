#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "damping/bracket.hpp"
#include "damping/cutoffs.hpp"

namespace damping {

// Gevrey Fourier multiplier A_k(eta) = exp(lambda <k,eta>^s), optionally
// truncated at rho > 1: the exponent r^s is replaced below rho by its
// tangent continuation Pi_rho(r) = r^s - s rho^{s-1} r for r <= rho and the
// constant (1-s) rho^s beyond, so the truncated weight is constant for
// <k,eta> >= rho and increases to A_k pointwise as rho grows.
struct GevreyWeight {
  double lambda = 0.2;
  double s = 0.5;
  std::optional<double> rho;  // absent = untruncated

  // log A_k(eta); safe at any frequency.
  double log_weight(double k, double eta) const;
  // A_k(eta); overflows to +inf beyond exp range, callers needing large
  // frequencies should use log_weight.
  double weight(double k, double eta) const;
};

inline double weight(const GevreyWeight& w, int k, double eta) {
  return w.weight(static_cast<double>(k), eta);
}

// A field in Fourier variables: complex values on a uniform xi-grid per
// nonzero integer mode k.
struct SpectralField {
  std::vector<int> ks;                              // nonzero modes, ascending
  std::vector<std::vector<std::complex<double>>> modes;  // per k, xi samples
  double xi0 = 0.0, dxi = 0.0;                      // uniform xi grid
};

// Weighted norm (sum_k int e^{2 lambda <k,xi>^s} |f~|^2 dxi)^{1/2} by
// trapezoid quadrature. Throws if the outermost decade of the grid carries
// more than 1e-10 of the weighted mass (unresolved tail).
double gevrey_norm(const SpectralField& f, const GevreyWeight& w);

struct CutoffDecayReport {
  double mu_fit = 0.0;     // fitted decay rate in exp(-mu |xi|^{a/(a+1)})
  double mu_refit = 0.0;   // second-window fit
  double window_lo = 0.0;  // fit window in |xi|
  double window_hi = 0.0;
  bool pass = false;       // mu_fit > 0 and windows agree within 20%
  std::string to_json() const;
};

// Transform-decay fit for psi_a (plateau = false) or psi'_{a,rho} with
// rho = 0.95 (plateau = true) on an n-point padded grid.
CutoffDecayReport verify_cutoff_decay(double a, int n, bool plateau = false);

struct PropertyReport {
  std::uint64_t seed = 0;
  int trials = 0;
  int violations = 0;
  double C_p32 = 0.0;                  // fitted constant of the difference bound
  std::vector<double> C_p32_by_rho;    // same constant per truncation rho
  std::string first_witness;           // empty when no violation
  bool pass = false;
  std::string to_json() const;
};

// Randomized checks of the weight inequalities: submultiplicativity
// A_k(eta) <= A_k(eta-alpha) e^{lambda <alpha>^s}, the difference bound
// |A_k(eta)-A_k(eta-zeta)| <= C <k,eta-zeta>^{s-1} e^{lambda(<k,eta-zeta>^s + <zeta>^s)},
// their truncated analogues across rho in {10,100,1000}, and the pointwise
// exponent comparison <k,eta>^s <= <k,eta-zeta>^s + <zeta>^s.
PropertyReport verify_weight_inequalities(const GevreyWeight& w, int trials,
                                          std::uint64_t seed = 20260826ULL);

}  // namespace damping
