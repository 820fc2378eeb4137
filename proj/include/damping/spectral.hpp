#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "damping/fft.hpp"
#include "damping/gevrey.hpp"
#include "damping/profiles.hpp"

namespace damping {

// Generalized eigenfunction psi^iota_{k,eps}(., y0): solution of the
// Rayleigh problem (singular boundary-value form) at one (k, y0, eps, iota).
struct EigenfunctionSlice {
  int k = 1;
  double y0 = 0.5;
  double eps = 0.0;  // signed; iota recorded separately for clarity
  int iota = +1;
  std::vector<cplx> psi;   // on y_j = j/n, Dirichlet
  double residual = 0.0;   // sup residual of the discrete differential form
  double residual_h0 = 0.0;  // relative residual of the integral reformulation
};

// Solves -k^2 psi + psi'' - b''/(b - b(y0) + i iota eps) psi =
// -omega0/(b - b(y0) + i iota eps) with Dirichlet conditions on the uniform
// grid carried by omega0. Rejects eps below the critical-layer resolution
// floor 5 h min b'.
EigenfunctionSlice solve_eigenfunction(const ShearProfile& p, int k, double y0, double eps,
                                       int iota, const std::vector<cplx>& omega0);

struct LapDifference {
  std::vector<cplx> limit;   // extrapolated psi^- - psi^+ on the y grid
  double norm = 0.0;         // L^2 norm of the limit
  double order_est = 0.0;    // empirical convergence order along the schedule
  bool converged = true;     // ratio test along the schedule
};

// psi^- - psi^+ per eps with extrapolation to eps -> 0+. The difference is
// an odd function of eps (psi^{-iota}(eps) = psi^{iota}(-eps)), so when
// odd_elimination is set the last three schedule points eliminate the eps
// and eps^3 terms; otherwise a two-point linear extrapolation is used (the
// validated default for interior y0 feeding the representation quadrature).
LapDifference lap_difference(const ShearProfile& p, int k, double y0,
                             const std::vector<cplx>& omega0,
                             const std::vector<double>& eps_schedule,
                             bool odd_elimination = false);

// Stream function at time t via the spectral representation:
// psi_k(t,y) = -(1/2 pi i) int e^{-i k b(y0) t} b'(y0) [psi^- - psi^+] dy0,
// with a midpoint y0-grid of spacing <= pi / (8 |k| t max b') and the
// two-point eps extrapolation per y0.
std::vector<cplx> assemble_stream(const ShearProfile& p, double t, int k,
                                  const std::vector<cplx>& omega0,
                                  const std::vector<double>& eps_schedule);

struct OperatorProbe {
  double Tnorm = 0.0;   // H^1_k operator norm of T_{k,y0,eps}
  double min_sv = 0.0;  // smallest H^1_k singular value of I + T
};

// Materializes T g(y) = phi(y) int G_k(y,z) b''(z) g(z)/(b(z)-b(y0)+i eps) dz
// on an n-point grid with the H^1_k quadratic form (one-sided boundary
// differences); returns the largest singular value of T and the smallest of
// I + T in that metric.
OperatorProbe operator_probe(const ShearProfile& p, const CoordinateMap& map, int k,
                             double y0, double eps, int n = 256);

// S_{k,w,eps} g(v) = int Psi(v) G_k(v,v') dB(v') g(v')/(v'-w+i eps) dv'
// (shifted variant S' evaluates at v+w against g on the shifted grid). The
// singular factor is integrated by parts onto log(v'-w+i eps) so the
// quadrature sees only the principal-branch log against smooth derivatives.
std::vector<cplx> apply_S(const CoordinateMap& map, int k, double w0, double eps,
                          const std::vector<cplx>& g, const std::vector<double>& vgrid,
                          bool shifted = false);

// Theta transform on a uniform (v,w) grid: Theta(v,w) =
// Psi(v+w) [phi^- - phi^+](v+w, w) Psi(w) with the eps limit taken per w,
// plus its 2D Fourier transform.
struct ThetaField {
  int k = 1;
  int nv = 0, nw = 0;
  double v0 = 0.0, dv = 0.0, w0 = 0.0, dw = 0.0;
  std::vector<cplx> values;  // row-major values[i*nw + j] = Theta(v_i, w_j)
  std::vector<cplx> ttilde;  // 2D transform, same layout, FFT frequency order
  std::vector<double> freq_v, freq_w;
};

ThetaField theta_transform(const ShearProfile& p, const CoordinateMap& map, int k,
                           const std::vector<cplx>& omega0,
                           const std::vector<double>& eps_schedule, int nv = 256, int nw = 128);

// Stream function from the Theta field via the (D3) route:
// Psi(v) psi_k(t, v) = -(1/2 pi i) int e^{-i k w t} Theta(v - w, w) dw.
std::vector<cplx> theta_route_stream(const ThetaField& theta, double t,
                                     const std::vector<double>& vgrid);

struct ThetaGevreyReport {
  double ratio_l2 = 0.0;   // (S2) left side over the weighted data norm
  double ratio_sup = 0.0;  // (S3) analogue
  double data_norm = 0.0;
  bool vacuous = false;    // zero data
  std::string to_json() const;
};

// Weighted-transform ratios of (S2)/(S3) inside the aliasing guard band with
// noise-floor truncation, normalized by the weighted norm of the initial
// pullback data. When w_data is supplied the denominator uses it instead of
// w, which exposes an over-strong measurement weight as a diverging ratio.
// band_cap, when finite, additionally clips both frequency guards; grid
// refinement comparisons should cap fine and coarse at the coarse grid's
// guard so both ratios quantify over the same frequency window.
ThetaGevreyReport verify_theta_gevrey(const ThetaField& theta, const GevreyWeight& w,
                                      const CoordinateMap& map,
                                      const std::vector<cplx>& omega0,
                                      const GevreyWeight* w_data = nullptr,
                                      double band_cap = std::numeric_limits<double>::infinity());

struct ScanReport {
  double min_sv = 0.0;
  int argmin_k = 0;
  double argmin_y0 = 0.0, argmin_eps = 0.0;
  double max_eps_jump = 0.0;  // largest min_sv change under eps refinement
  bool pass = false;          // min_sv >= 1e-3 and jump <= 0.2
  std::string to_json() const;
};

// Embedded-eigenvalue gate: min_sv of I + T over k in {1..kmax}, a y0 grid,
// and the eps schedule.
ScanReport embedded_eigenvalue_scan(const ShearProfile& p, int kmax);

}  // namespace damping
