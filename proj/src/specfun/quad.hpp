#pragma once

// binary128 accumulation used by the ascending series. Only + - * / are
// needed, which libgcc provides in software without libquadmath.

#include <complex>

namespace bic1d::specfun::detail {

using quad = __float128;

// 2^-112
inline constexpr double kQuadEps = 1.925929944387236e-34;

inline quad qabs(quad x) { return x < 0 ? -x : x; }

struct QComplex {
  quad re = 0;
  quad im = 0;

  QComplex() = default;
  QComplex(quad r, quad i = 0) : re(r), im(i) {}
  explicit QComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
  // max(|re|, |im|) is enough for magnitude bookkeeping.
  double magnitude() const {
    const double a = static_cast<double>(qabs(re));
    const double b = static_cast<double>(qabs(im));
    return a > b ? a : b;
  }

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

inline QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
inline QComplex operator*(const QComplex& a, const QComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex operator*(const QComplex& a, quad s) { return {a.re * s, a.im * s}; }
inline QComplex operator/(const QComplex& a, const QComplex& b) {
  const quad den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

}  // namespace bic1d::specfun::detail
