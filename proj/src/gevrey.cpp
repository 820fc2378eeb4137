#include "damping/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "damping/fft.hpp"

namespace damping {

double GevreyWeight::log_weight(double k, double eta) const {
  const double r = bracket(k, eta);
  if (!rho) return lambda * std::pow(r, s);
  const double rr = *rho;
  // Pi_rho(r) = r^s - s rho^{s-1} r below rho, constant (1-s) rho^s beyond
  if (r <= rr) return lambda * (std::pow(r, s) - s * std::pow(rr, s - 1.0) * r);
  return lambda * (1.0 - s) * std::pow(rr, s);
}

double GevreyWeight::weight(double k, double eta) const { return std::exp(log_weight(k, eta)); }

double gevrey_norm(const SpectralField& f, const GevreyWeight& w) {
  if (f.ks.size() != f.modes.size())
    throw std::invalid_argument("gevrey_norm: ragged field");
  double total = 0.0, tail = 0.0;
  for (size_t ik = 0; ik < f.ks.size(); ++ik) {
    const auto& mode = f.modes[ik];
    const size_t n = mode.size();
    const size_t edge = n / 10;
    for (size_t j = 0; j < n; ++j) {
      const double xi = f.xi0 + j * f.dxi;
      const double mass =
          std::exp(2.0 * w.log_weight(static_cast<double>(f.ks[ik]), xi)) * std::norm(mode[j]) *
          f.dxi * ((j == 0 || j + 1 == n) ? 0.5 : 1.0);
      total += mass;
      if (j < edge || j + edge >= n) tail += mass;
    }
  }
  if (total > 0.0 && tail > 1e-10 * total)
    throw std::runtime_error("gevrey_norm: weighted mass in the outer decade of the grid; "
                             "extend the frequency extent");
  return std::sqrt(total);
}

namespace {

// Least-squares line through (x, y); returns slope.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int m = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

CutoffDecayReport verify_cutoff_decay(double a, int n, bool plateau) {
  if (n < 4096) throw std::invalid_argument("verify_cutoff_decay: n >= 4096 required");
  // sample on [0, L] with the cutoff living on [0,1]; zero padding is exact
  const double L = 8.0;
  const double dv = L / n;
  std::vector<cplx> f(n, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    const double x = j * dv;
    if (x >= 1.0) break;
    f[j] = plateau ? cutoff_plateau(a, 0.95, x) : cutoff_psi(a, x);
  }
  const auto ft = fourier_transform(f, 0.0, dv);
  const double p = a / (a + 1.0);

  // resolved band: above the fit floor and below where noise takes over
  double peak = 0.0;
  for (const auto& c : ft) peak = std::max(peak, std::abs(c));
  const double floor = 1e-13 * peak;
  double xi_top = 0.0;
  for (int m = 0; m < n / 2; ++m) {
    const double xi = fft_freq(m, n, dv);
    if (std::abs(ft[m]) < floor) break;
    xi_top = xi;
  }
  CutoffDecayReport rep;
  if (xi_top <= 16.0) return rep;

  auto window_fit = [&](double lo, double hi) {
    std::vector<double> xs, ys;
    for (int m = 0; m < n / 2; ++m) {
      const double xi = fft_freq(m, n, dv);
      if (xi < lo || xi > hi) continue;
      const double mag = std::abs(ft[m]);
      if (mag < floor) continue;
      xs.push_back(std::pow(xi, p));
      ys.push_back(std::log(mag));
    }
    if (xs.size() < 8) return 0.0;
    return -fit_slope(xs, ys);
  };
  rep.window_lo = xi_top / 4.0;
  rep.window_hi = xi_top / 2.0;
  rep.mu_fit = window_fit(rep.window_lo, rep.window_hi);
  rep.mu_refit = window_fit(xi_top / 8.0, xi_top / 4.0);
  rep.pass = rep.mu_fit > 0.0 && rep.mu_refit > 0.0 &&
             std::abs(rep.mu_fit - rep.mu_refit) <= 0.2 * std::max(rep.mu_fit, rep.mu_refit);
  return rep;
}

std::string CutoffDecayReport::to_json() const {
  std::ostringstream os;
  os << "{\"mu_fit\":" << mu_fit << ",\"mu_refit\":" << mu_refit << ",\"window_lo\":" << window_lo
     << ",\"window_hi\":" << window_hi << ",\"pass\":" << (pass ? "true" : "false") << "}";
  return os.str();
}

PropertyReport verify_weight_inequalities(const GevreyWeight& w, int trials,
                                          std::uint64_t seed) {
  if (trials < 10000) throw std::invalid_argument("verify_weight_inequalities: trials >= 1e4");
  PropertyReport rep;
  rep.seed = seed;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kd(1, 16);
  std::uniform_real_distribution<double> signd(0.0, 1.0);
  std::uniform_real_distribution<double> core(-30.0, 30.0);
  std::uniform_real_distribution<double> wide(-1.0, 1.0);
  auto draw = [&]() {
    // mixture of a bulk range and heavy tails out to ~1e4
    if (signd(rng) < 0.7) return core(rng);
    const double u = wide(rng);
    return std::copysign(std::exp(9.2 * std::abs(u)), u);
  };
  const std::vector<double> rhos = {10.0, 100.0, 1000.0};
  std::vector<double> c_p4(rhos.size(), 0.0);
  const double lam = w.lambda, s = w.s;

  auto log_trunc = [&](double rho, double k, double eta) {
    GevreyWeight t = w;
    t.rho = rho;
    return t.log_weight(k, eta);
  };

  for (int it = 0; it < trials; ++it) {
    const double k = (signd(rng) < 0.5 ? 1 : -1) * kd(rng);
    const double eta = draw(), alpha = draw(), zeta = draw(), beta = draw();

    // (F31.4) in log space with C = 1: <k,eta>^s <= <k,eta-alpha>^s + <alpha>^s
    {
      const double lhs = std::pow(bracket(k, eta), s);
      const double rhs = std::pow(bracket(k, eta - alpha), s) + std::pow(bracket(alpha), s);
      if (lhs > rhs * (1.0 + 1e-12)) {
        ++rep.violations;
        if (rep.first_witness.empty()) {
          std::ostringstream os;
          os << "F31.4 k=" << k << " eta=" << eta << " alpha=" << alpha;
          rep.first_witness = os.str();
        }
      }
    }
    // (P3.2) fitted constant: |e^A - e^B| / (<k,eta-zeta>^{s-1} e^{B + lam<zeta>^s})
    {
      const double A = lam * std::pow(bracket(k, eta), s);
      const double B = lam * std::pow(bracket(k, eta - zeta), s);
      const double gap = std::abs(A - B);
      if (gap > 0.0) {
        const double log_lhs = std::max(A, B) + std::log(-std::expm1(-gap));
        const double log_rhs = (s - 1.0) * std::log(bracket(k, eta - zeta)) + B +
                               lam * std::pow(bracket(zeta), s);
        rep.C_p32 = std::max(rep.C_p32, std::exp(log_lhs - log_rhs));
      }
    }
    // (P3) with C = 1 and (P4) fitted, per truncation rho
    for (size_t ir = 0; ir < rhos.size(); ++ir) {
      const double rho = rhos[ir];
      const double la = log_trunc(rho, k, alpha);
      const double lb = log_trunc(rho, k, beta);
      const double lab = log_trunc(rho, k, alpha + beta);
      if (lab > la + lam * std::pow(bracket(beta), s) + 1e-12) {
        ++rep.violations;
        if (rep.first_witness.empty()) {
          std::ostringstream os;
          os << "P3 rho=" << rho << " k=" << k << " alpha=" << alpha << " beta=" << beta;
          rep.first_witness = os.str();
        }
      }
      const double gap = std::abs(la - lb);
      if (gap > 0.0) {
        const double log_lhs = std::max(la, lb) + std::log(-std::expm1(-gap));
        const double log_rhs = (s - 1.0) * std::log(bracket(k, alpha)) + la +
                               lam * std::pow(bracket(alpha - beta), s);
        c_p4[ir] = std::max(c_p4[ir], std::exp(log_lhs - log_rhs));
      }
    }
  }
  rep.C_p32_by_rho = c_p4;
  // The fitted difference-bound constants need only be uniformly bounded in
  // rho (they legitimately shrink when the truncation bites early).
  double cmax = 0.0;
  for (double c : c_p4) cmax = std::max(cmax, c);
  rep.pass = rep.violations == 0 && cmax <= 10.0 && std::isfinite(rep.C_p32);
  return rep;
}

std::string PropertyReport::to_json() const {
  std::ostringstream os;
  os << "{\"seed\":" << seed << ",\"trials\":" << trials << ",\"violations\":" << violations
     << ",\"C_p32\":" << C_p32 << ",\"C_p4_by_rho\":[";
  for (size_t i = 0; i < C_p32_by_rho.size(); ++i)
    os << (i ? "," : "") << C_p32_by_rho[i];
  os << "],\"first_witness\":\"" << first_witness << "\",\"pass\":" << (pass ? "true" : "false")
     << "}";
  return os.str();
}

}  // namespace damping
