#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "damping/fft.hpp"
#include "damping/gevrey.hpp"
#include "damping/profiles.hpp"

namespace damping {

// One Fourier-in-x vorticity mode on the uniform wall-normal grid
// y_j = j/n, j = 0..n.
struct ModeField {
  int k = 1;
  double time = 0.0;
  std::vector<cplx> omega;  // n+1 samples
};

struct Snapshot {
  double t = 0.0;
  std::vector<cplx> omega;
  std::vector<cplx> psi;  // stream, Dirichlet
  std::vector<cplx> ux;   // -d psi / dy
  std::vector<cplx> uy;   // i k psi
  double psi_norm = 0.0, ux_norm = 0.0, uy_norm = 0.0;  // L^2(0,1)
};

struct Trajectory {
  int k = 1;
  int n = 0;
  double dt = 0.0;
  std::vector<Snapshot> snaps;
};

// Solves (k^2 - d^2/dy^2) psi = -omega with psi(0) = psi(1) = 0 by a
// tridiagonal solve; checks the algebraic residual against 1e-8 * ||omega||.
std::vector<cplx> solve_stream(int k, const std::vector<cplx>& omega);

// One RK4 step of d/dt omega = -i k b omega + i k b'' psi[omega].
// Rejects dt violating dt * |k| * max|b| <= 0.5.
void step_mode(const ShearProfile& p, ModeField& state, double dt);

// Gaussian-Gevrey initial bump: exp(-((y-center)/width)^2) times the
// cutoff psi_a rescaled to [theta1, 1-theta1]. The defaults reproduce the
// Orr-rate reference data (flat cutoff a = 1/4, channel-wide Gaussian).
std::vector<cplx> gaussian_gevrey_bump(const ShearProfile& p, int n, double center = 0.5,
                                       double width = 0.5, double a = 0.25);

// Evolves each k in kset from omega0 to time T, snapshotting every
// snap_every time units (dt <= CFL bound; pass dt = 0 for the bound itself).
std::vector<Trajectory> evolve(const ShearProfile& p, const std::vector<cplx>& omega0,
                               const std::vector<int>& kset, double T, double dt,
                               double snap_every = 1.0);

// Pullback of one snapshot to sheared coordinates: f_k(t,v) =
// omega_k(t, binv(v)) e^{i k t v} on a uniform v-grid of nv points,
// interpolated through the phase-unwound field omega e^{i k b t} (smooth in
// y), plus its Fourier transform.
struct PullbackSlice {
  double t = 0.0;
  std::vector<cplx> f;      // f_k(t, v) on the v grid
  std::vector<cplx> ftilde; // transform over the padded box
  double v0 = 0.0, dv = 0.0;
  std::vector<double> freq;
};

PullbackSlice pullback(const CoordinateMap& map, int k, const Snapshot& snap, int nv);

// Weighted-norm history Lambda(t) of the pullback along a trajectory.
std::vector<std::pair<double, double>> gevrey_norm_history(const CoordinateMap& map,
                                                           const Trajectory& traj,
                                                           const GevreyWeight& w, int nv);

struct ScatteringFit {
  double rate = 0.0;         // fitted slope with the extrapolated limit
  double rate_lastsnap = 0.0;  // slope using f(T_max) as the limit (biased)
  double fit_lo = 0.0, fit_hi = 0.0;
  bool reliable = false;     // residual curve monotone over the window
  std::vector<cplx> f_inf;   // extrapolated limit profile on the v grid
};

// Fits the (U5) rate: residual ||e^{lambda' <k,xi>^s}(f~(t) - f~_inf)|| vs t
// in log-log over [12, T/2], with f_inf = 2 f(T) - f(T/2) (the last-snapshot
// estimate is biased steep by (1/t)/(1/t - 1/T) and is reported alongside).
ScatteringFit scattering_fit(const CoordinateMap& map, const Trajectory& traj,
                             const GevreyWeight& w_prime, int nv);

struct OrrExponents {
  double psi = 0.0, ux = 0.0, uy = 0.0;
  double fit_lo = 0.0, fit_hi = 0.0;
};

// Least-squares slopes of log norm vs log t over snapshots within
// [t_lo, t_hi] (default window [20, 50]; needs >= 8 snapshots with t >= 5).
OrrExponents orr_exponents(const Trajectory& traj, double t_lo = 20.0, double t_hi = 50.0);

}  // namespace damping
