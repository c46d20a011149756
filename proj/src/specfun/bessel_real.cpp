#include <algorithm>
#include <cmath>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/specfun.hpp"
#include "detail.hpp"
#include "quad.hpp"

namespace bic1d::specfun {

using detail::cospi;
using detail::kEps;
using detail::kPi;
using detail::kQuadEps;
using detail::qabs;
using detail::quad;
using detail::sinpi;

namespace {

constexpr int kSeriesTermCap = 500;
constexpr int kContinuedFractionCap = 1000000;
constexpr double kTiny = 1e-300;

void check_args(double nu, double z) {
  if (!std::isfinite(nu) || std::fabs(nu) > detail::kMaxOrder) {
    std::ostringstream msg;
    msg << "order " << nu << " outside |nu| <= 50";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << "argument z = " << z << " must be positive and finite";
    throw Error(ErrorKind::Domain, msg.str());
  }
}

// Ascending series sum_k (-1)^k (z/2)^(nu+2k) / (k! Gamma(nu+k+1)).
// The sum runs in binary128; (z/2)^nu and the Gamma seeds stay in double.
RealResult series_j(double nu, double z) {
  const double half = 0.5 * z;
  const double log_half = std::log(half);
  const double prefactor = std::exp(nu * log_half);
  if (!std::isfinite(prefactor)) {
    throw Error(ErrorKind::Overflow, "J_nu(z) overflows for negative order at tiny z");
  }
  const quad w = -static_cast<quad>(half) * static_cast<quad>(half);

  // Terms below k0 have Gamma arguments < 1/2 and get individually computed
  // reciprocal Gammas; from k0 on the reciprocal Gamma follows by recurrence.
  const int k0 = nu + 1.0 >= 0.5 ? 0 : static_cast<int>(std::ceil(-0.5 - nu));

  quad power = 1;  // w^k / k!
  quad head = 0;
  quad head_abs = 0;
  int k = 0;
  for (; k < k0; ++k) {
    const quad term = power * static_cast<quad>(rgamma(nu + k + 1.0));
    head += term;
    head_abs += qabs(term);
    power *= w / static_cast<quad>(k + 1);
  }

  quad rg = static_cast<quad>(rgamma(nu + k0 + 1.0));
  quad tail = 0;
  quad max_term = head_abs;
  bool converged = false;
  for (; k < kSeriesTermCap; ++k) {
    const quad term = power * rg;
    tail += term;
    const quad mag = qabs(term);
    if (mag > max_term) max_term = mag;
    const quad total = qabs(head + tail);
    if (static_cast<double>(k) > half && (mag <= static_cast<quad>(kQuadEps) * total || mag == 0)) {
      converged = true;
      break;
    }
    power *= w / static_cast<quad>(k + 1);
    rg /= static_cast<quad>(nu) + static_cast<quad>(k + 1);
  }
  if (!converged) {
    throw Error(ErrorKind::ConvergenceFailure, "Bessel series did not converge in 500 terms");
  }

  const double sum = static_cast<double>(head + tail);
  const double value = prefactor * sum;
  const double err =
      std::fabs(prefactor) * (16.0 * kEps * static_cast<double>(head_abs + qabs(tail)) +
                              kQuadEps * (k + 1) * static_cast<double>(max_term)) +
      std::fabs(value) * kEps * (8.0 + std::fabs(nu) + 2.0 * std::fabs(nu * log_half));
  return {value, err, Regime::Series};
}

// Hankel asymptotic expansion; gives J and Y together.
struct AsymptoticPair {
  double j;
  double y;
  double abs_err;
};

AsymptoticPair asymptotic_jy(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  const double eight_z = 8.0 * z;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double truncation = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * eight_z);
    if (k > 2 && std::fabs(next) > std::fabs(term)) break;  // past the smallest term
    term = next;
    // signs cycle +, -, -, + over k = 1, 2, 3, 4 (Q, P, Q, P)
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q += sign * term;
    } else {
      p += sign * term;
    }
    truncation = std::fabs(term);
    if (term == 0.0) {
      truncation = 0.0;
      break;
    }
    if (truncation < kEps * kEps * (std::fabs(p) + std::fabs(q))) break;
  }
  // omega = z - (nu/2 + 1/4) pi, expanded so that z reaches cos/sin exactly
  const double shift = 0.5 * nu + 0.25;
  const double cs = cospi(shift);
  const double sn = sinpi(shift);
  const double cz = std::cos(z);
  const double sz = std::sin(z);
  const double cos_omega = cz * cs + sz * sn;
  const double sin_omega = sz * cs - cz * sn;
  const double amp = std::sqrt(2.0 / (kPi * z));
  const double j = amp * (p * cos_omega - q * sin_omega);
  const double y = amp * (p * sin_omega + q * cos_omega);
  const double err = amp * (truncation + 8.0 * kEps * (std::fabs(p) + std::fabs(q)));
  return {j, y, err};
}

// Steed's method: CF1 for J'/J at nu, downward recurrence to |mu| <= 1/2, CF2
// for (H1'/H1) at mu, Wronskian normalization, upward recurrence for Y.
// nu >= 0.
CylinderValues steed_jy(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  int isign = 1;
  double h = nu * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i <= kContinuedFractionCap; ++i) {
    b += xi2;
    d = b - d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  if (i > kContinuedFractionCap) {
    throw Error(ErrorKind::ConvergenceFailure, "Steed CF1 did not converge");
  }

  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  const double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  // CF2
  double a = 0.25 - xmu2;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i <= kContinuedFractionCap; ++i) {
    a += 2.0 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::fabs(dr) + std::fabs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::fabs(cr) + std::fabs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::fabs(dlr - 1.0) + std::fabs(dli) < kEps) break;
  }
  if (i > kContinuedFractionCap) {
    throw Error(ErrorKind::ConvergenceFailure, "Steed CF2 did not converge");
  }

  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  double rymu = rjmu * gam;
  const double rymup = rymu * (p + q / gam);
  double ry1 = xmu * xi * rymu - rymup;
  fact = rjmu / rjl;

  CylinderValues out;
  out.j = rjl1 * fact;
  out.jp = rjp1 * fact;
  for (int k = 1; k <= nl; ++k) {
    const double rytemp = (xmu + k) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  const double scale = std::max({std::fabs(out.j), std::fabs(out.y), std::sqrt(w)});
  // CF1 takes ~x steps at large x; the absolute error grows like eps*x there
  out.abs_err = 16.0 * kEps * (nl + 4) * scale + 4.0 * kEps * x;
  out.regime = Regime::ContinuedFraction;
  return out;
}

RealResult bessel_j_unchecked(double nu, double z) {
  if (z <= series_limit(nu)) return series_j(nu, z);
  if (z >= asymptotic_limit(nu)) {
    const auto pair = asymptotic_jy(nu, z);
    return {pair.j, pair.abs_err, Regime::Asymptotic};
  }
  if (nu >= 0.0) {
    const auto cyl = steed_jy(nu, z);
    return {cyl.j, cyl.abs_err, Regime::ContinuedFraction};
  }
  // J_{-m} = cos(m pi) J_m - sin(m pi) Y_m
  const double m = -nu;
  const auto cyl = steed_jy(m, z);
  const double value = cospi(m) * cyl.j - sinpi(m) * cyl.y;
  const double err = cyl.abs_err + 2.0 * kEps * (std::fabs(cyl.j) + std::fabs(cyl.y));
  return {value, err, Regime::Reflection};
}

void check_non_integer(double nu) {
  if (std::fabs(nu - std::round(nu)) <= 1e-8) {
    std::ostringstream msg;
    msg << "order " << nu << " is within 1e-8 of an integer; nudge the order by ~1e-6";
    throw Error(ErrorKind::NearIntegerOrder, msg.str());
  }
}

}  // namespace

double series_limit(double nu) noexcept { return std::max(10.0, std::fabs(nu)); }

double asymptotic_limit(double nu) noexcept { return std::max(30.0, 1.5 * nu * nu); }

RealResult bessel_j(double nu, double z) {
  check_args(nu, z);
  return bessel_j_unchecked(nu, z);
}

RealResult bessel_j_prime(double nu, double z) {
  check_args(nu, z);
  const auto lower = bessel_j_unchecked(nu - 1.0, z);
  const auto upper = bessel_j_unchecked(nu + 1.0, z);
  RealResult out;
  out.value = 0.5 * (lower.value - upper.value);
  out.abs_err = 0.5 * (lower.abs_err + upper.abs_err) + kEps * std::fabs(out.value);
  out.regime = lower.abs_err >= upper.abs_err ? lower.regime : upper.regime;
  return out;
}

RealResult bessel_y(double nu, double z) {
  check_args(nu, z);
  check_non_integer(nu);
  const auto plus = bessel_j_unchecked(nu, z);
  const auto minus = bessel_j_unchecked(-nu, z);
  const double c = cospi(nu);
  const double s = sinpi(nu);
  const double value = (plus.value * c - minus.value) / s;
  const double err = (plus.abs_err * std::fabs(c) + minus.abs_err +
                      2.0 * kEps * (std::fabs(plus.value) + std::fabs(minus.value))) /
                     std::fabs(s);
  return {value, err, Regime::Reflection};
}

ComplexResult hankel(HankelKind kind, double nu, double z) {
  const auto j = bessel_j(nu, z);
  const auto y = bessel_y(nu, z);
  const double sign = kind == HankelKind::H1 ? 1.0 : -1.0;
  return {cplx(j.value, sign * y.value), j.abs_err + y.abs_err, Regime::Reflection};
}

CylinderValues cylinder_jy(double nu, double z) {
  if (nu < 0.0) throw Error(ErrorKind::InvalidArgument, "cylinder_jy needs nu >= 0");
  check_args(nu, z);
  if (z >= asymptotic_limit(nu)) {
    const auto at_nu = asymptotic_jy(nu, z);
    const auto below = asymptotic_jy(nu - 1.0, z);
    CylinderValues out;
    out.j = at_nu.j;
    out.y = at_nu.y;
    // C'_nu = C_{nu-1} - (nu/z) C_nu
    out.jp = below.j - nu / z * at_nu.j;
    out.yp = below.y - nu / z * at_nu.y;
    out.abs_err = at_nu.abs_err + below.abs_err;
    out.regime = Regime::Asymptotic;
    return out;
  }
  return steed_jy(nu, z);
}

}  // namespace bic1d::specfun
