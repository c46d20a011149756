#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "bic1d/specfun.hpp"

namespace bic1d::specfun::detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kPi = std::numbers::pi;

// sin(pi x) and cos(pi x) with exact argument reduction, so that values near
// integer x keep full relative accuracy.
inline double sinpi(double x) {
  const double r = std::remainder(x, 2.0);
  if (r > 0.5) return std::sin(kPi * (1.0 - r));
  if (r < -0.5) return -std::sin(kPi * (1.0 + r));
  return std::sin(kPi * r);
}

inline double cospi(double x) {
  const double r = std::fabs(std::remainder(x, 2.0));
  return std::sin(kPi * (0.5 - r));
}

inline std::complex<double> sinpi(std::complex<double> w) {
  const double y = kPi * w.imag();
  return {sinpi(w.real()) * std::cosh(y), cospi(w.real()) * std::sinh(y)};
}

inline std::complex<double> cospi(std::complex<double> w) {
  const double y = kPi * w.imag();
  return {cospi(w.real()) * std::cosh(y), -sinpi(w.real()) * std::sinh(y)};
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Maximum order magnitude accepted internally (public limit 50 plus one for
// the derivative recurrence).
inline constexpr double kMaxOrder = 51.0;

}  // namespace bic1d::specfun::detail
