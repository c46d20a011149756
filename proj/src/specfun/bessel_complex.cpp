#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/specfun.hpp"
#include "detail.hpp"
#include "quad.hpp"

namespace bic1d::specfun {

using detail::kEps;
using detail::kPi;
using detail::kQuadEps;
using detail::QComplex;
using detail::quad;

namespace {

constexpr int kTermCap = 500;
constexpr double kSeriesPreferred = 40.0;
constexpr double kTargetAccuracy = 1e-8;

struct Attempt {
  cplx value;
  double abs_err;
};

// Same layout as the real-order series: binary128 sum, double seeds.
std::optional<Attempt> series(cplx nu, double z, double& partial_err) {
  const double half = 0.5 * z;
  const cplx log_half(std::log(half), 0.0);
  const cplx prefactor = std::exp(nu * log_half);
  const quad w = -static_cast<quad>(half) * static_cast<quad>(half);
  const QComplex qnu(nu);

  const int k0 = nu.real() + 1.0 >= 0.5 ? 0 : static_cast<int>(std::ceil(-0.5 - nu.real()));
  quad power = 1;
  QComplex head;
  double head_abs = 0.0;
  int k = 0;
  for (; k < k0; ++k) {
    const QComplex term = QComplex(rgamma(nu + static_cast<double>(k + 1))) * power;
    head += term;
    head_abs += term.magnitude();
    power *= w / static_cast<quad>(k + 1);
  }
  const cplx seed_arg = nu + static_cast<double>(k0 + 1);
  QComplex rg(rgamma(seed_arg));
  QComplex tail;
  double max_term = head_abs;
  bool converged = false;
  for (; k < kTermCap; ++k) {
    const QComplex term = rg * power;
    tail += term;
    const double mag = term.magnitude();
    max_term = std::max(max_term, mag);
    QComplex total = head;
    total += tail;
    if (static_cast<double>(k) > half && (mag <= kQuadEps * total.magnitude() || mag == 0.0)) {
      converged = true;
      break;
    }
    power *= w / static_cast<quad>(k + 1);
    rg = rg / (qnu + QComplex(static_cast<quad>(k + 1)));
  }
  const double seed_rel = kEps * (32.0 + 8.0 * std::abs(seed_arg) * std::log(std::abs(seed_arg) + 8.0));
  QComplex sum = head;
  sum += tail;
  const cplx value = prefactor * sum.to_complex();
  const double err = std::abs(prefactor) * (4.0 * kEps * head_abs + seed_rel * tail.magnitude() * 1.5 +
                                            kQuadEps * (k + 1) * max_term) +
                     std::abs(value) * kEps * (2.0 + std::abs(nu) * std::fabs(log_half.real()));
  partial_err = err;
  if (!converged) return std::nullopt;
  return Attempt{value, err};
}

Attempt asymptotic(cplx nu, double z) {
  const cplx mu = 4.0 * nu * nu;
  const double eight_z = 8.0 * z;
  cplx p = 1.0;
  cplx q = 0.0;
  cplx term = 1.0;
  double truncation = 0.0;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    const cplx next = term * (mu - odd * odd) / (k * eight_z);
    if (k > 2 && std::abs(next) > std::abs(term)) break;
    term = next;
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q += sign * term;
    } else {
      p += sign * term;
    }
    truncation = std::abs(term);
    if (truncation == 0.0) break;
    if (truncation < kEps * kEps * (std::abs(p) + std::abs(q))) break;
  }
  // omega = z - theta, theta = (nu/2 + 1/4) pi
  const cplx theta_over_pi = 0.5 * nu + 0.25;
  const cplx ct = detail::cospi(theta_over_pi);
  const cplx st = detail::sinpi(theta_over_pi);
  const double cz = std::cos(z);
  const double sz = std::sin(z);
  const cplx cos_omega = cz * ct + sz * st;
  const cplx sin_omega = sz * ct - cz * st;
  const double amp = std::sqrt(2.0 / (kPi * z));
  const cplx value = amp * (p * cos_omega - q * sin_omega);
  const double scale = amp * (std::abs(cos_omega) + std::abs(sin_omega));
  return {value, scale * (truncation + 8.0 * kEps * (std::abs(p) + std::abs(q)))};
}

}  // namespace

ComplexResult bessel_j_complex_order(cplx nu, double z) {
  if (!(z > 0.0) || !std::isfinite(z) || z > 1e4) {
    std::ostringstream msg;
    msg << "argument z = " << z << " outside (0, 1e4]";
    throw Error(ErrorKind::Domain, msg.str());
  }
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || std::fabs(nu.imag()) > 20.0 ||
      std::fabs(nu.real()) > detail::kMaxOrder) {
    throw Error(ErrorKind::InvalidArgument, "complex order outside |Im nu| <= 20, |Re nu| <= 50");
  }
  // J_{-n} = (-1)^n J_n; the series seeds would hit Gamma poles otherwise
  if (nu.imag() == 0.0 && detail::is_nonpositive_integer(nu.real()) && nu.real() < 0.0) {
    auto positive = bessel_j_complex_order(-nu, z);
    if (static_cast<long>(-nu.real()) % 2 != 0) positive.value = -positive.value;
    return positive;
  }

  double series_err = 0.0;
  if (z <= kSeriesPreferred) {
    const auto s = series(nu, z, series_err);
    if (!s) {
      throw Error(ErrorKind::ConvergenceFailure, "complex-order Bessel series exceeded 500 terms",
                  series_err);
    }
    return {s->value, s->abs_err, Regime::Series};
  }
  // the target is absolute for |J| <= 1 and relative beyond, since large
  // imaginary orders scale J by ~exp(pi |Im nu| / 2)
  const Attempt asym = asymptotic(nu, z);
  const double tol = kTargetAccuracy * std::max(1.0, std::abs(asym.value));
  if (asym.abs_err <= 1e-2 * tol) return {asym.value, asym.abs_err, Regime::Asymptotic};
  const auto s = series(nu, z, series_err);
  if (s && s->abs_err < asym.abs_err && s->abs_err <= tol) {
    return {s->value, s->abs_err, Regime::Series};
  }
  if (asym.abs_err <= tol) return {asym.value, asym.abs_err, Regime::Asymptotic};
  std::ostringstream msg;
  msg << "no regime reaches 1e-8 for nu = " << nu << ", z = " << z;
  throw Error(ErrorKind::ConvergenceFailure, msg.str(), std::min(asym.abs_err, series_err));
}

RealResult hyp2f3(double a1, double a2, double b1, double b2, double b3, double w) {
  for (const double b : {b1, b2, b3}) {
    if (detail::is_nonpositive_integer(b)) {
      std::ostringstream msg;
      msg << "2F3 lower parameter " << b << " is a non-positive integer";
      throw Error(ErrorKind::Pole, msg.str());
    }
  }
  if (!std::isfinite(w) || std::fabs(w) > 1e4) {
    throw Error(ErrorKind::InvalidArgument, "2F3 argument outside |w| <= 1e4");
  }
  if (w == 0.0) return {1.0, 0.0, Regime::Series};
  const quad qw = w;
  quad term = 1;
  quad sum = 1;
  quad running_max = 1;  // largest |partial sum|
  quad max_term = 1;
  int small_run = 0;
  int k = 0;
  bool converged = false;
  for (; !converged && k < kTermCap; ++k) {
    const quad ratio = (static_cast<quad>(a1) + k) * (static_cast<quad>(a2) + k) /
                       ((static_cast<quad>(b1) + k) * (static_cast<quad>(b2) + k) *
                        (static_cast<quad>(b3) + k) * static_cast<quad>(k + 1));
    term *= ratio * qw;
    sum += term;
    const quad mag = detail::qabs(term);
    if (mag > max_term) max_term = mag;
    if (detail::qabs(sum) > running_max) running_max = detail::qabs(sum);
    if (term == 0) {
      converged = true;  // terminating series
    } else if (mag < static_cast<quad>(1e-16) * running_max) {
      if (++small_run >= 3) converged = true;
    } else {
      small_run = 0;
    }
  }
  const double value = static_cast<double>(sum);
  const double err = 2.0 * static_cast<double>(detail::qabs(term)) +
                     kQuadEps * (k + 1) * static_cast<double>(max_term) +
                     kQuadEps * static_cast<double>(running_max) + kEps * std::fabs(value);
  if (!converged) {
    throw Error(ErrorKind::ConvergenceFailure, "2F3 series exceeded 500 terms", err);
  }
  return {value, err, Regime::Series};
}

}  // namespace bic1d::specfun
