#include "damping/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "damping/bracket.hpp"
#include "damping/cutoffs.hpp"
#include "damping/fft.hpp"

#include <nlohmann/json.hpp>

namespace damping {

namespace {

constexpr int kRefGridSize = 2048;
constexpr int kFineIntervals = 16384;

std::vector<double> chebyshev_grid(int n) {
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) {
    g[j] = 0.5 - 0.5 * std::cos(M_PI * (j + 0.5) / n);
  }
  g.front() = std::min(g.front(), 1e-12);
  return g;
}

// 5-point Gauss-Legendre on [a, b].
template <typename F>
double gauss5(F&& f, double a, double b) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                              0.4786286704993665, 0.2369268850561891};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += w[i] * f(mid + half * x[i]);
  return acc * half;
}

}  // namespace

Jet3 ShearProfile::chi_jet(double y) const {
  if (couette_) return Jet3::constant(0.0);
  const double lo = theta0_, hi = 1.0 - theta0_;
  if (y <= lo || y >= hi) return Jet3::constant(0.0);
  const double scale = 1.0 / (hi - lo);
  const double x = (y - lo) * scale;
  const Jet3 xj = Jet3::variable(x);
  // chi = exp(-c [g(x) - g(1/2)]), g(x) = x^-a + (1-x)^-a; unit height at 1/2.
  const double gmid = 2.0 * std::pow(2.0, shape_a_);
  const Jet3 expo = (pow(xj, -shape_a_) + pow(1.0 - xj, -shape_a_) - gmid) * (-shape_c_);
  if (expo.f < -700.0) return Jet3::constant(0.0);
  Jet3 j = exp(expo);
  j.f1 *= scale;
  j.f2 *= scale * scale;
  j.f3 *= scale * scale * scale;
  return j;
}

double ShearProfile::chi_antideriv(double y) const {
  if (couette_ || y <= theta0_) return 0.0;
  y = std::min(y, 1.0);
  const int j = std::min(static_cast<int>(y / fine_h_), kFineIntervals - 1);
  const double base = integ1_[j];
  return base + gauss5([this](double t) { return chi_jet(t).f; }, j * fine_h_, y);
}

double ShearProfile::chi_antideriv_second(double y) const {
  if (couette_ || y <= theta0_) return 0.0;
  y = std::min(y, 1.0);
  const int j = std::min(static_cast<int>(y / fine_h_), kFineIntervals - 1);
  return integ2_[j] +
         gauss5([this](double t) { return chi_antideriv(t); }, j * fine_h_, y);
}

Jet3 ShearProfile::jet(double y) const {
  if (couette_) return {y, 1.0, 0.0, 0.0};
  const Jet3 c = chi_jet(y);
  return {y + amplitude_ * chi_antideriv_second(y), 1.0 + amplitude_ * chi_antideriv(y),
          amplitude_ * c.f, amplitude_ * c.f1};
}

ShearProfile ShearProfile::couette(double theta0, double theta1, double s) {
  ShearProfile p;
  p.name_ = "couette";
  p.couette_ = true;
  p.theta0_ = theta0;
  p.theta1_ = theta1;
  p.s_ = s;
  p.grid_ = chebyshev_grid(kRefGridSize);
  return p;
}

ShearProfile ShearProfile::bump(double amplitude, double a, double theta0, double theta1,
                                double s) {
  if (!(theta0 > 0.0 && theta0 < 0.1))
    throw std::invalid_argument("bump profile: theta0 must lie in (0, 1/10)");
  if (!(theta1 > 0.0 && theta1 < theta0))
    throw std::invalid_argument("bump profile: theta1 must lie in (0, theta0)");
  if (!(a > 0.0)) throw std::invalid_argument("bump profile: shape exponent a must be > 0");
  ShearProfile p;
  p.name_ = "bump";
  p.couette_ = false;
  p.theta0_ = theta0;
  p.theta1_ = theta1;
  p.s_ = s;
  p.amplitude_ = amplitude;
  p.shape_a_ = a;
  p.grid_ = chebyshev_grid(kRefGridSize);
  p.fine_h_ = 1.0 / kFineIntervals;
  // Accumulate int chi and int int chi on the fine grid.
  p.integ1_.assign(kFineIntervals + 1, 0.0);
  p.integ2_.assign(kFineIntervals + 1, 0.0);
  for (int j = 0; j < kFineIntervals; ++j) {
    const double lo = j * p.fine_h_, hi = (j + 1) * p.fine_h_;
    p.integ1_[j + 1] =
        p.integ1_[j] + gauss5([&p](double t) { return p.chi_jet(t).f; }, lo, hi);
    p.integ2_[j + 1] =
        p.integ2_[j] + gauss5(
                           [&p, j, lo](double t) {
                             return p.integ1_[j] +
                                    gauss5([&p](double u) { return p.chi_jet(u).f; }, lo, t);
                           },
                           lo, hi);
  }
  // Monotonicity band of (B).
  const double b1_max = 1.0 + std::abs(amplitude) * (amplitude >= 0 ? p.integ1_.back() : 0.0);
  double b1_min = 1.0;
  if (amplitude < 0.0) b1_min = 1.0 + amplitude * p.integ1_.back();
  if (b1_min < theta0 / 100.0 || b1_max > 100.0 / theta0)
    throw std::invalid_argument("bump profile: amplitude violates the monotonicity band");
  if (b1_min <= 0.0) throw std::invalid_argument("bump profile: amplitude breaks monotonicity");
  return p;
}

ShearProfile make_couette() { return ShearProfile::couette(1.0 / 20.0, 1.0 / 40.0, 0.5); }

ShearProfile make_bump_profile(double amplitude, double a, double theta0, double theta1,
                               double s, bool require_remark12) {
  ShearProfile p = ShearProfile::bump(amplitude, a, theta0, theta1, s);
  if (require_remark12) {
    double b1_min = 1e300, b3_max = 0.0;
    for (double y : p.grid()) {
      const Jet3 j = p.jet(y);
      b1_min = std::min(b1_min, j.f1);
      b3_max = std::max(b3_max, std::abs(j.f3));
    }
    if (b1_min < 1.0 || b3_max >= 1.0) {
      std::ostringstream msg;
      msg << "bump profile: Remark-1.2 gate violated (min b' = " << b1_min
          << ", max |b'''| = " << b3_max << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  return p;
}

namespace {

// Weighted transform integral of (B1):
//   int exp(2 theta0 <xi>^{(s+1)/2}) |b''~(xi)|^2 dxi,
// on a zero-padded transform of b'', truncated at a window Xi where the
// fitted super-exponential tail contributes < 1e-8.
struct B1Result {
  double integral = 0.0;
  double tail_bound = 0.0;
  bool resolved = true;
  std::string diagnostic;
};

B1Result b1_integral(const ShearProfile& p, double s, double theta0) {
  B1Result r;
  if (p.is_couette()) return r;
  const int n = 1 << 16;
  const double pad = 16.0;  // transform over [0, 16], b'' supported in [0,1]
  const double dx = pad / n;
  std::vector<cplx> samples(n, 0.0);
  for (int j = 0; j * dx <= 1.0 && j < n; ++j) samples[j] = p.b2(j * dx);
  const std::vector<cplx> hat = fourier_transform(samples, 0.0, dx);

  // Envelope: collapse to |xi| bins (transform of a real function; keep the
  // positive-frequency half).
  std::vector<double> freq, mag;
  double mmax = 0.0;
  for (int m = 0; m <= n / 2; ++m) {
    freq.push_back(std::abs(fft_freq(m, n, dx)));
    mag.push_back(std::abs(hat[m]));
    mmax = std::max(mmax, mag.back());
  }
  if (mmax == 0.0) return r;

  // Fit |b''~| <= C exp(-mu xi^{(s+1)/2}) on the resolved window.
  const double floor = 1e-13 * mmax;
  const double expo = 0.5 * (s + 1.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t i = 0; i < freq.size(); ++i) {
    if (freq[i] < 20.0 || mag[i] < floor) continue;
    const double x = std::pow(freq[i], expo), y = std::log(mag[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 16) {
    r.resolved = false;
    r.diagnostic = "B1: transform window too short to fit the decay envelope";
    return r;
  }
  const double mu = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  if (mu <= theta0) {
    r.resolved = false;
    std::ostringstream msg;
    msg << "B1: fitted transform decay mu = " << mu << " does not dominate theta0 = " << theta0;
    r.diagnostic = msg.str();
    return r;
  }
  // Envelope constant: smallest C that dominates all resolved samples.
  double logC = -1e300;
  for (size_t i = 0; i < freq.size(); ++i) {
    if (mag[i] < floor) continue;
    logC = std::max(logC, std::log(mag[i]) + mu * std::pow(freq[i], expo));
  }

  // Truncation window: largest resolved frequency.
  double Xi = 0.0;
  for (size_t i = 0; i < freq.size(); ++i)
    if (mag[i] >= floor) Xi = std::max(Xi, freq[i]);

  // Integral over |xi| <= Xi (both transform halves).
  const double dxi = 2.0 * M_PI / pad;
  double integral = 0.0;
  for (int m = 0; m < n; ++m) {
    const double xi = fft_freq(m, n, dx);
    const double a = std::abs(hat[m]);
    if (std::abs(xi) > Xi || a < floor) continue;
    integral += std::exp(2.0 * theta0 * std::pow(bracket(xi), expo)) * a * a * dxi;
  }
  r.integral = integral;

  // Analytic tail bound: e^{2 theta0 <xi>^p} <= e^{2 theta0} e^{2 theta0 xi^p}.
  double tail = 0.0;
  const double rate = 2.0 * (mu - theta0);
  for (double xi = Xi; xi < Xi + 4000.0; xi += 0.5) {
    const double t = std::exp(2.0 * logC + 2.0 * theta0 - rate * std::pow(xi, expo));
    tail += t;
    if (t < 1e-300) break;
  }
  r.tail_bound = 2.0 * tail;  // both halves; 0.5-wide panels bounded by sup
  if (r.tail_bound > 1e-8) {
    r.resolved = false;
    std::ostringstream msg;
    msg << "B1: tail bound " << r.tail_bound << " above 1e-8 at window Xi = " << Xi;
    r.diagnostic = msg.str();
  }
  return r;
}

}  // namespace

AssumptionReport check_assumptions(const ShearProfile& p, double s, double lambda) {
  (void)lambda;  // the weight scale enters only through downstream norms
  AssumptionReport rep;
  const double th0 = p.theta0();

  double b1_min = 1e300, b1_max = -1e300, collar_b2 = 0.0, b3_max = 0.0, b_sup = 0.0;
  bool increasing = true;
  double prev = -1e300;
  for (double y : p.grid()) {
    const Jet3 j = p.jet(y);
    b1_min = std::min(b1_min, j.f1);
    b1_max = std::max(b1_max, j.f1);
    b3_max = std::max(b3_max, std::abs(j.f3));
    b_sup = std::max(b_sup, std::abs(j.f));
    if (y <= th0 || y >= 1.0 - th0) collar_b2 = std::max(collar_b2, std::abs(j.f2));
    if (j.f <= prev) increasing = false;
    prev = j.f;
  }
  b_sup = std::max(b_sup, std::abs(p.b(1.0)));

  rep.checks.push_back({"band_lower: b' >= theta0/100", b1_min, th0 / 100.0,
                        b1_min >= th0 / 100.0});
  rep.checks.push_back({"band_upper: b' <= 100/theta0", b1_max, 100.0 / th0,
                        b1_max <= 100.0 / th0});
  rep.checks.push_back({"collar: b'' = 0 on [0,theta0] u [1-theta0,1]", collar_b2, 0.0,
                        collar_b2 == 0.0});
  rep.checks.push_back({"monotone: b strictly increasing", increasing ? 1.0 : 0.0, 1.0,
                        increasing});

  const B1Result b1r = b1_integral(p, s, th0);
  const double b1_total = b_sup * b_sup + b1r.integral;
  rep.checks.push_back({"B1: sup|b|^2 + weighted transform integral < 1/theta0", b1_total,
                        1.0 / th0, b1r.resolved && b1_total < 1.0 / th0});

  // Remark-1.2 sufficient condition; informational, not part of overall pass.
  const bool remark = (b1_min >= 1.0) && (b3_max < 1.0);
  rep.checks.push_back({"remark12: min b' >= 1 and max |b'''| < 1",
                        remark ? 1.0 : 0.0, 1.0, remark});

  rep.pass = true;
  for (size_t i = 0; i + 1 < rep.checks.size(); ++i) {  // all but remark12
    if (!rep.checks[i].pass) {
      rep.pass = false;
      if (rep.first_violation.empty())
        rep.first_violation = rep.checks[i].condition +
                              (b1r.diagnostic.empty() || i != 4 ? "" : " (" + b1r.diagnostic + ")");
    }
  }
  return rep;
}

std::string AssumptionReport::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  j["first_violation"] = first_violation;
  j["conditions"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["conditions"].push_back(
        {{"condition", c.condition}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  }
  return j.dump(2);
}

CoordinateMap::CoordinateMap(const ShearProfile& p) : profile_(p) {
  // Reject non-monotone samples up front.
  double prev = -1e300;
  for (double y : p.grid()) {
    const double v = p.b(y);
    if (v <= prev) throw std::invalid_argument("build_map: profile samples are not increasing");
    prev = v;
  }
  v_lo_ = p.b(0.0);
  v_hi_ = p.b(1.0);
  const double th1 = p.theta1();
  phi_lo_ = th1 / 3.0;
  phi_hi_ = 1.0 - th1 / 3.0;
  phi_a_ = (1.0 + p.s()) / (1.0 - p.s());
  // Smoothstep transitions fill the whole margin between the support edge
  // and the data band, so phi is 1 on [theta1, 1-theta1].
  phi_margin_ = th1 - phi_lo_;
}

Jet3 CoordinateMap::phi_jet(double y) const {
  if (y <= phi_lo_ || y >= phi_hi_) return Jet3::constant(0.0);
  const double m = phi_margin_;
  if (y < phi_lo_ + m)
    return rescaled_jet([this](double x) { return smoothstep_jet(phi_a_, x); }, phi_lo_,
                        phi_lo_ + m, y);
  if (y > phi_hi_ - m) {
    // Mirror: descend from 1 to 0 across the right margin.
    const Jet3 j = rescaled_jet([this](double x) { return smoothstep_jet(phi_a_, x); },
                                phi_hi_ - m, phi_hi_, y);
    return 1.0 - j;
  }
  return Jet3::constant(1.0);
}

double CoordinateMap::binv(double v) const {
  if (v <= v_lo_) return 0.0;
  if (v >= v_hi_) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (profile_.b(mid) < v ? lo : hi) = mid;
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const Jet3 j = profile_.jet(y);
    const double r = j.f - v;
    if (std::abs(r) <= 1e-13) break;
    y = std::clamp(y - r / j.f1, lo, hi);
  }
  return y;
}

double CoordinateMap::B(double v) const { return profile_.b1(binv(v)); }

double CoordinateMap::dB_dv(double v) const {
  const Jet3 j = profile_.jet(binv(v));
  return j.f2 / j.f1;
}

double CoordinateMap::Psi(double v) const {
  if (v <= v_lo_ || v >= v_hi_) return 0.0;
  return phi(binv(v));
}

CoordinateMap build_map(const ShearProfile& p) { return CoordinateMap(p); }

}  // namespace damping
