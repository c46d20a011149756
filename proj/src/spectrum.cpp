#include "bic1d/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/parallel.hpp"
#include "bic1d/specfun.hpp"

namespace bic1d {

namespace sf = specfun;

namespace {

constexpr double kEdgeMargin = 1e-4;
constexpr double kEdgeScanMin = 1e-6;
constexpr double kEdgeScanMax = 1e-2;
constexpr double kEdgeScanStep = 1e-5;
constexpr double kBisectionWidth = 1e-12;
constexpr double kResidualLimit = 1e-8;
constexpr double kDuplicateWidth = 1e-9;

struct Bracket {
  Parity parity;
  double lo, hi;
  double f_lo, f_hi;
};

// Sign changes of both conditions on a uniform grid over [u0, u1].
void scan_brackets(const ModelParams& p, double u0, double u1, double step,
                   std::vector<Bracket>& out) {
  if (!(u1 > u0)) return;
  const auto n = static_cast<std::size_t>(std::ceil((u1 - u0) / step));
  std::vector<double> us(n + 1);
  for (std::size_t i = 0; i <= n; ++i) us[i] = i == n ? u1 : u0 + static_cast<double>(i) * step;
  std::vector<double> even(n + 1), odd(n + 1);
  parallel_for(n + 1, [&](std::size_t i) {
    even[i] = condition(p, Parity::Even, us[i]);
    odd[i] = condition(p, Parity::Odd, us[i]);
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (std::signbit(even[i]) != std::signbit(even[i + 1]) || even[i] == 0.0) {
      out.push_back({Parity::Even, us[i], us[i + 1], even[i], even[i + 1]});
    }
    if (std::signbit(odd[i]) != std::signbit(odd[i + 1]) || odd[i] == 0.0) {
      out.push_back({Parity::Odd, us[i], us[i + 1], odd[i], odd[i + 1]});
    }
  }
}

double refine(const ModelParams& p, Bracket b) {
  if (b.f_lo == 0.0) return b.lo;
  while (b.hi - b.lo > kBisectionWidth) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    const double f = condition(p, b.parity, mid);
    if (f == 0.0) return mid;
    if (std::signbit(f) == std::signbit(b.f_lo)) {
      b.lo = mid;
      b.f_lo = f;
    } else {
      b.hi = mid;
      b.f_hi = f;
    }
  }
  // one secant step across the final bracket
  double u = 0.5 * (b.lo + b.hi);
  if (b.f_hi != b.f_lo) {
    const double secant = b.lo - b.f_lo * (b.hi - b.lo) / (b.f_hi - b.f_lo);
    if (secant >= b.lo && secant <= b.hi) u = secant;
  }
  return u;
}

}  // namespace

double condition(const ModelParams& p, Parity parity, double u) {
  if (parity == Parity::Even) return sf::bessel_j_prime(u, p.qa()).value;
  return sf::bessel_j(u, p.qa()).value;
}

std::vector<BicState> find_bic_spectrum(const ModelParams& p, double scan_resolution) {
  if (!(scan_resolution > 1e-6 && scan_resolution < 1e-1)) {
    throw Error(ErrorKind::InvalidArgument, "scan_resolution must lie in (1e-6, 1e-1)");
  }
  const double qa = p.qa();
  std::vector<Bracket> brackets;
  scan_brackets(p, kEdgeMargin, qa - kEdgeMargin, scan_resolution, brackets);
  scan_brackets(p, kEdgeScanMin, std::min(kEdgeScanMax, qa - kEdgeMargin), kEdgeScanStep,
                brackets);

  std::vector<BicState> states(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t i) {
    const Bracket& b = brackets[i];
    const double u = refine(p, b);
    const double residual = std::fabs(condition(p, b.parity, u));
    if (residual > kResidualLimit) {
      std::ostringstream msg;
      msg << "root refinement in [" << b.lo << ", " << b.hi << "] left residual " << residual;
      throw Error(ErrorKind::BracketFailure, msg.str());
    }
    BicState& s = states[i];
    s.parity = b.parity;
    s.kappa_a = u;
    s.energy = energy_of_order(p, u);
    s.residual = residual;
  });

  // descending u is ascending energy; Even before Odd on exact ties
  std::sort(states.begin(), states.end(), [](const BicState& x, const BicState& y) {
    if (x.kappa_a != y.kappa_a) return x.kappa_a > y.kappa_a;
    return x.parity == Parity::Even && y.parity == Parity::Odd;
  });
  std::vector<BicState> unique;
  for (const BicState& s : states) {
    // the main and edge scans overlap on (1e-4, 1e-2)
    const bool duplicate =
        std::any_of(unique.begin(), unique.end(), [&](const BicState& t) {
          return t.parity == s.parity && std::fabs(t.kappa_a - s.kappa_a) <= kDuplicateWidth;
        });
    if (!duplicate) unique.push_back(s);
  }
  for (std::size_t i = 0; i < unique.size(); ++i) unique[i].index = static_cast<int>(i) + 1;
  return unique;
}

namespace {

void check_norm_params(const NormParams& np) {
  if (!(np.r > 0.0)) {
    std::ostringstream msg;
    msg << "closed-form norm needs r > 0 (got " << np.r << "); the integral is not given for r <= 0";
    throw Error(ErrorKind::Domain, msg.str());
  }
  if (!(np.s > 0.0)) throw Error(ErrorKind::Domain, "closed-form norm needs s > 0");
}

}  // namespace

double half_line_norm(const NormParams& np) {
  check_norm_params(np);
  const double r = np.r;
  const double s = np.s;
  if (s * s > 1e4) return half_line_norm_neumann(np);
  const auto f = sf::hyp2f3(r, r + 0.5, 1.0 + r, 1.0 + r, 1.0 + 2.0 * r, -s * s);
  const double g = sf::gamma(r + 1.0).value;
  const double prefactor = std::pow(0.5 * s, 2.0 * r) / (2.0 * r * g * g);
  const double value = 1.0 / (2.0 * r) - prefactor * f.value;
  // for large s the 2F3 terms reach ~e^{2s} and cancel down to O(1/s)
  if (prefactor * f.abs_err <= 1e-12 * std::fabs(value)) return value;
  return half_line_norm_neumann(np);
}

double half_line_norm_neumann(const NormParams& np) {
  check_norm_params(np);
  const double r = np.r;
  const double s = np.s;
  const double j0 = sf::bessel_j(r, s).value;
  const double j1 = sf::bessel_j(r + 1.0, s).value;
  // Miller: J_{r+k}(s) is the minimal solution, so recur downwards from far
  // above the turning point and rescale against J_r or J_{r+1}.
  const auto top = static_cast<std::size_t>(std::ceil(s + 30.0 + 6.0 * std::cbrt(s)));
  std::vector<double> y(top + 2, 0.0);
  y[top] = 1e-30;
  for (std::size_t m = top; m >= 1; --m) {
    y[m - 1] = 2.0 * (r + static_cast<double>(m)) / s * y[m] - y[m + 1];
    if (std::fabs(y[m - 1]) > 1e250) {
      for (std::size_t k = m - 1; k <= top; ++k) y[k] *= 1e-250;
    }
  }
  const double scale = std::fabs(j0) >= std::fabs(j1) ? j0 / y[0] : j1 / y[1];
  double tail = 0.0;
  for (std::size_t k = top; k >= 1; --k) tail += (y[k] * scale) * (y[k] * scale);
  return (1.0 - j0 * j0 - 2.0 * tail) / (2.0 * r);
}

double norm_sq_closed_form(const NormParams& np, double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "length scale a must be positive");
  return 2.0 * a * half_line_norm(np);
}

BicState normalize(const ModelParams& p, const BicState& state) {
  BicState out = state;
  out.norm_sq = norm_sq_closed_form({state.kappa_a, p.qa()}, p.a());
  return out;
}

}  // namespace bic1d
