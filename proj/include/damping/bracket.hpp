#pragma once

#include <cmath>

namespace damping {

// Japanese bracket <x> = (1 + x^2)^{1/2}. The two-argument form
// <k,xi> = (1 + k^2 + xi^2)^{1/2} is the single project-wide convention.
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

inline double bracket(double k, double xi) { return std::sqrt(1.0 + k * k + xi * xi); }

}  // namespace damping
