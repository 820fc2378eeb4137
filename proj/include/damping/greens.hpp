#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "damping/profiles.hpp"

namespace damping {

// Green's function of k^2 - d^2/dy^2 on (0,1) with Dirichlet conditions,
// G_k(y,z) = sinh(ky)sinh(k(1-z))/(k sinh k) for y <= z, symmetric branch
// otherwise. Evaluated via exponentials of negative arguments only, so it
// stays finite for |k| up to the thousands.
double eval_G(int k, double y, double z);

// Off-diagonal part of d^2/dydz G_k; the delta at y = z is carried
// symbolically by callers. y = z is rejected.
double eval_Gprime(int k, double y, double z);

// Localized kernel in v-coordinates: samples of
// Gstar(v,w) = Psi(v) G_k(binv(v), binv(w)) Psi(w) on an n x n uniform grid
// over [v_lo, v_hi] padded by 25% per side, plus the 2D discrete transform.
struct KernelSpectrum {
  int k = 0;
  int n = 0;
  double box_lo = 0.0, box_hi = 0.0;  // padded box, both axes
  double h = 0.0;                     // grid spacing
  std::vector<double> grid;           // n sample points (shared by v and w)
  std::vector<double> values;         // row-major Gstar(v_i, w_j), n*n
  std::vector<double> freq;           // transform frequencies (FFT order)
  std::vector<std::complex<double>> ghat;  // row-major ghat(xi_i, eta_j)
};

KernelSpectrum localized_kernel(int k, const CoordinateMap& map, int n);

struct DecayReport {
  double delta_fit = 0.0;
  double C_fit = 0.0;
  double max_residual = 0.0;  // max of log|ghat| above the fitted envelope
  bool pass = false;
  std::string to_json() const;
};

// Fits the largest delta with |ghat(xi,eta)| <= C exp(-delta <xi+eta>^p) /
// (k^2 + eta^2), p = (s+1)/2, over frequencies inside the aliasing guard
// band |xi|,|eta| <= 0.4 * Nyquist. pass iff delta_fit > 0.
//
// fit_band_cap, when finite, additionally clips the fit window to
// |xi|,|eta| <= fit_band_cap. Grid-refinement comparisons need this: the
// compensated envelope is not a single exponential over an unbounded band,
// so fitting two grids over their own Nyquist-scaled windows measures the
// window, not the discretization. Cap both fits at the coarse grid's guard
// to compare like with like.
DecayReport verify_kernel_fourier_decay(const KernelSpectrum& spec, double s,
                                        double fit_band_cap = std::numeric_limits<double>::infinity());

struct BoundReport {
  double C_fit = 0.0;               // single fitted constant across all k
  double worst_ratio = 0.0;         // max quantity / (log<k>+1)^m over all entries
  std::vector<std::string> lines;   // per-(k,m) diagnostics
  bool pass = false;
  std::string to_json() const;
};

// Suprema over y of the L^1 (against log^m factors, A in [-10,10]) and L^2
// quantities of G_k and G'_k with their |k| scalings; pass iff a single
// constant C <= 100 dominates all of them across k in {1..kmax}.
BoundReport verify_kernel_bounds(int kmax = 16);

}  // namespace damping
