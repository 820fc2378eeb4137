#pragma once

#include <cmath>

namespace damping {

// Truncated Taylor jet of order 3: value and first three derivatives with
// respect to a single scalar variable. Used to carry analytic derivatives
// through cutoff/profile constructions instead of finite differencing.
struct Jet3 {
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;

  static Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }
  static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.f + b.f, a.f1 + b.f1, a.f2 + b.f2, a.f3 + b.f3};
}
inline Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.f - b.f, a.f1 - b.f1, a.f2 - b.f2, a.f3 - b.f3};
}
inline Jet3 operator-(const Jet3& a) { return {-a.f, -a.f1, -a.f2, -a.f3}; }
inline Jet3 operator+(const Jet3& a, double c) { return {a.f + c, a.f1, a.f2, a.f3}; }
inline Jet3 operator+(double c, const Jet3& a) { return a + c; }
inline Jet3 operator-(const Jet3& a, double c) { return {a.f - c, a.f1, a.f2, a.f3}; }
inline Jet3 operator-(double c, const Jet3& a) { return {c - a.f, -a.f1, -a.f2, -a.f3}; }
inline Jet3 operator*(const Jet3& a, double c) { return {a.f * c, a.f1 * c, a.f2 * c, a.f3 * c}; }
inline Jet3 operator*(double c, const Jet3& a) { return a * c; }

// Leibniz rule up to third order.
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.f * b.f,
          a.f1 * b.f + a.f * b.f1,
          a.f2 * b.f + 2.0 * a.f1 * b.f1 + a.f * b.f2,
          a.f3 * b.f + 3.0 * a.f2 * b.f1 + 3.0 * a.f1 * b.f2 + a.f * b.f3};
}

// Faa di Bruno for h(g(x)) given h, h', h'', h''' at g.f.
inline Jet3 compose(double h0, double h1, double h2, double h3, const Jet3& g) {
  return {h0,
          h1 * g.f1,
          h2 * g.f1 * g.f1 + h1 * g.f2,
          h3 * g.f1 * g.f1 * g.f1 + 3.0 * h2 * g.f1 * g.f2 + h1 * g.f3};
}

inline Jet3 exp(const Jet3& g) {
  const double e = std::exp(g.f);
  return compose(e, e, e, e, g);
}

// g^p for real exponent p; requires g.f > 0.
inline Jet3 pow(const Jet3& g, double p) {
  const double h0 = std::pow(g.f, p);
  const double h1 = p * h0 / g.f;
  const double h2 = (p - 1.0) * h1 / g.f;
  const double h3 = (p - 2.0) * h2 / g.f;
  return compose(h0, h1, h2, h3, g);
}

inline Jet3 inv(const Jet3& g) {
  const double i0 = 1.0 / g.f;
  return compose(i0, -i0 * i0, 2.0 * i0 * i0 * i0, -6.0 * i0 * i0 * i0 * i0, g);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * inv(b); }
inline Jet3 operator/(const Jet3& a, double c) { return a * (1.0 / c); }

}  // namespace damping
