#include <array>
#include <cmath>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/specfun.hpp"
#include "detail.hpp"

namespace bic1d::specfun {

using detail::kEps;
using detail::kPi;

namespace {

// Lanczos approximation, g = 7, nine terms. Relative error below 2e-16 on
// the right half plane before the power/exponential factor.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kSqrtTwoPi = 2.5066282746310005024;

// Largest argument whose Gamma value is representable.
constexpr double kGammaOverflow = 171.62;

double lanczos_real(double w) {
  // w >= 0.5
  const double x = w - 1.0;
  double series = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) {
    series += kLanczosCoeff[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  // split the power so t^(x+1/2) cannot overflow before exp(-t) scales it down
  const double half_power = std::pow(t, 0.5 * (x + 0.5));
  return kSqrtTwoPi * half_power * (half_power * std::exp(-t)) * series;
}

cplx lanczos_complex(cplx w) {
  const cplx x = w - 1.0;
  cplx series = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) {
    series += kLanczosCoeff[i] / (x + static_cast<double>(i));
  }
  const cplx t = x + kLanczosG + 0.5;
  return kSqrtTwoPi * std::exp((x + 0.5) * std::log(t) - t) * series;
}

double complex_rel_err(cplx w) {
  const double t = std::abs(w) + kLanczosG + 1.0;
  return kEps * (32.0 + 8.0 * std::abs(w) * std::log(t));
}

[[noreturn]] void throw_pole(double w) {
  std::ostringstream msg;
  msg << "gamma has a pole at w = " << w;
  throw Error(ErrorKind::Pole, msg.str());
}

}  // namespace

RealResult gamma(double w) {
  if (!std::isfinite(w)) throw Error(ErrorKind::Domain, "gamma argument is not finite");
  if (detail::is_nonpositive_integer(w)) throw_pole(w);
  if (w > kGammaOverflow) {
    throw Error(ErrorKind::Overflow, "gamma overflows for w > 171.62");
  }
  if (w >= 0.5) {
    const double v = lanczos_real(w);
    return {v, 16.0 * kEps * std::fabs(v), Regime::Asymptotic};
  }
  // Gamma(w) Gamma(1-w) = pi / sin(pi w)
  if (1.0 - w > kGammaOverflow) {
    // |Gamma(w)| < 1e-300 here
    return {0.0, std::numeric_limits<double>::min(), Regime::Reflection};
  }
  const double v = kPi / (detail::sinpi(w) * lanczos_real(1.0 - w));
  return {v, 32.0 * kEps * std::fabs(v), Regime::Reflection};
}

ComplexResult gamma(cplx w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw Error(ErrorKind::Domain, "gamma argument is not finite");
  }
  if (w.imag() == 0.0 && detail::is_nonpositive_integer(w.real())) throw_pole(w.real());
  if (w.real() > kGammaOverflow) {
    throw Error(ErrorKind::Overflow, "gamma overflows for Re(w) > 171.62");
  }
  if (w.real() >= 0.5) {
    const cplx v = lanczos_complex(w);
    return {v, complex_rel_err(w) * std::abs(v), Regime::Asymptotic};
  }
  const cplx v = kPi / (detail::sinpi(w) * lanczos_complex(1.0 - w));
  return {v, 2.0 * complex_rel_err(1.0 - w) * std::abs(v), Regime::Reflection};
}

double rgamma(double w) {
  if (detail::is_nonpositive_integer(w)) return 0.0;
  if (w >= 0.5) {
    if (w > kGammaOverflow) return 0.0;
    return 1.0 / lanczos_real(w);
  }
  if (1.0 - w > kGammaOverflow) {
    throw Error(ErrorKind::Overflow, "1/gamma overflows for w < -170.6");
  }
  return detail::sinpi(w) * lanczos_real(1.0 - w) / kPi;
}

cplx rgamma(cplx w) {
  if (w.imag() == 0.0) return rgamma(w.real());
  if (w.real() >= 0.5) return 1.0 / lanczos_complex(w);
  return detail::sinpi(w) * lanczos_complex(1.0 - w) / kPi;
}

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Series:
      return "series";
    case Regime::ContinuedFraction:
      return "continued_fraction";
    case Regime::Asymptotic:
      return "asymptotic";
    case Regime::Reflection:
      return "reflection";
  }
  return "unknown";
}

}  // namespace bic1d::specfun
