#pragma once

#include <complex>

namespace bic1d::specfun {

using cplx = std::complex<double>;

// Which evaluation branch produced a value.
enum class Regime { Series, ContinuedFraction, Asymptotic, Reflection };

const char* to_string(Regime regime) noexcept;

template <typename T>
struct EvalResult {
  T value{};
  double abs_err = 0.0;
  Regime regime = Regime::Series;
};

using RealResult = EvalResult<double>;
using ComplexResult = EvalResult<cplx>;

enum class HankelKind { H1, H2 };

// Regime boundaries for real-order J_nu(z).
double series_limit(double nu) noexcept;      // series for z <= this
double asymptotic_limit(double nu) noexcept;  // Hankel expansion for z >= this

// Gamma function (Lanczos, reflection for Re(w) < 1/2).
RealResult gamma(double w);
ComplexResult gamma(cplx w);

// 1/Gamma(w); zero at the poles instead of throwing.
double rgamma(double w);
cplx rgamma(cplx w);

// Bessel function of the first kind, real order |nu| <= 50, z > 0.
RealResult bessel_j(double nu, double z);

// dJ_nu/dz = (J_{nu-1} - J_{nu+1}) / 2.
RealResult bessel_j_prime(double nu, double z);

// Y_nu via (J_nu cos(nu pi) - J_{-nu}) / sin(nu pi); rejects |nu - round(nu)| <= 1e-8.
RealResult bessel_y(double nu, double z);

// H^(1) = J + iY, H^(2) = J - iY, same order restrictions as bessel_y.
ComplexResult hankel(HankelKind kind, double nu, double z);

// J_nu(z) for complex order, |Im nu| <= 20, 0 < z <= 1e4.
ComplexResult bessel_j_complex_order(cplx nu, double z);

// Generalized hypergeometric 2F3(a1, a2; b1, b2, b3; w).
RealResult hyp2f3(double a1, double a2, double b1, double b2, double b3, double w);

// J, Y and their z-derivatives for real order nu >= 0, valid at integer orders
// too. Used where the reflection formula for Y degenerates.
struct CylinderValues {
  double j = 0.0;
  double y = 0.0;
  double jp = 0.0;
  double yp = 0.0;
  double abs_err = 0.0;
  Regime regime = Regime::ContinuedFraction;
};

CylinderValues cylinder_jy(double nu, double z);

}  // namespace bic1d::specfun
