#include "bic1d/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "bic1d/error.hpp"
#include "bic1d/parallel.hpp"
#include "bic1d/specfun.hpp"

namespace bic1d {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kProjectionReach = 3.5;  // table length for projections, in units of a
constexpr double kCandidateThreshold = 1e-3;
constexpr double kTailWarning = 0.1;
constexpr int kMinExtrema = 12;

NumerovOptions ode_options(const ModelParams& p, double base_step, double ppw) {
  NumerovOptions o;
  o.base_step = base_step;
  o.points_per_wavelength = ppw;
  o.segment_length = 0.25 * p.a();
  return o;
}

// Simpson's rule for irregular spacing on nodes [first, last].
double simpson(const std::vector<double>& xs, const std::vector<double>& f, std::size_t first,
               std::size_t last) {
  if (last <= first) return 0.0;
  const std::size_t n = last - first;
  auto h = [&](std::size_t i) { return xs[first + i + 1] - xs[first + i]; };
  auto y = [&](std::size_t i) { return f[first + i]; };
  if (n == 1) return 0.5 * h(0) * (y(0) + y(1));
  double sum = 0.0;
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double h0 = h(2 * i);
    const double h1 = h(2 * i + 1);
    sum += (h0 + h1) / 6.0 *
           ((2.0 - h1 / h0) * y(2 * i) + (h0 + h1) * (h0 + h1) / (h0 * h1) * y(2 * i + 1) +
            (2.0 - h0 / h1) * y(2 * i + 2));
  }
  if (n % 2 == 1) {
    const double h0 = h(n - 2);
    const double h1 = h(n - 1);
    sum += y(n) * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) +
           y(n - 1) * (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0) -
           y(n - 2) * h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
  }
  return sum;
}

std::size_t nearest_node(const std::vector<double>& xs, double x) {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0;
  if (it == xs.end()) return xs.size() - 1;
  const auto i = static_cast<std::size_t>(it - xs.begin());
  return (xs[i] - x) < (x - xs[i - 1]) ? i : i - 1;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

double golden_minimum(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && hi - lo > 1e-11 * std::max(1.0, std::fabs(lo)); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

double ode_coefficient(const ModelParams& p, double energy, double x) {
  return (potential(p, x) - energy) / p.h2m();
}

RealTable integrate_parity_ode(const ModelParams& p, double energy, Parity parity, double x_max,
                               double base_step, double points_per_wavelength) {
  if (!(x_max > 0.0) || x_max > 8.0 * p.a() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "x_max must lie in (0, 8a]");
  }
  const double psi0 = parity == Parity::Even ? 1.0 : 0.0;
  const double dpsi0 = parity == Parity::Even ? 0.0 : 1.0;
  const auto g = [&](double x) { return ode_coefficient(p, energy, x); };
  const NumerovResult<double> half = integrate_numerov<double>(
      g, 0.0, x_max, psi0, dpsi0, ode_options(p, base_step, points_per_wavelength));

  RealTable table;
  const std::size_t n = half.xs.size();
  table.xs.reserve(2 * n - 1);
  table.values.reserve(2 * n - 1);
  const double mirror = parity == Parity::Even ? 1.0 : -1.0;
  for (std::size_t i = n - 1; i >= 1; --i) {
    table.xs.push_back(-half.xs[i]);
    table.values.push_back(mirror * half.psi[i]);
  }
  table.xs.insert(table.xs.end(), half.xs.begin(), half.xs.end());
  table.values.insert(table.values.end(), half.psi.begin(), half.psi.end());
  table.energy = energy;
  table.parity = parity;
  table.source = Source::OdeIntegration;
  return table;
}

double closed_form_deviation(const ModelParams& p, const RealTable& ode, double u, Parity parity,
                             double x_limit) {
  validate(ode);
  if (ode.xs.empty()) throw Error(ErrorKind::InvalidArgument, "empty table");
  const std::size_t anchor = nearest_node(ode.xs, 0.1 * p.a());
  const double ref = bic_wavefunction_at_order(p, u, parity, ode.xs[anchor]);
  if (ode.values[anchor] == 0.0 || ref == 0.0) {
    throw Error(ErrorKind::IllConditioned, "anchor value vanishes");
  }
  const double scale = ref / ode.values[anchor];
  double dev = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < ode.xs.size(); ++i) {
    if (std::fabs(ode.xs[i]) > x_limit) continue;
    const double cf = bic_wavefunction_at_order(p, u, parity, ode.xs[i]);
    dev = std::max(dev, std::fabs(cf - scale * ode.values[i]));
    peak = std::max(peak, std::fabs(cf));
  }
  return dev / peak;
}

ProjectionReport project_onto_basis(const ModelParams& p, const RealTable& table, double x1,
                                    double x2) {
  if (table.xs.empty()) throw Error(ErrorKind::InvalidArgument, "empty table");
  if (x1 == x2 || x1 < p.a() || x2 < p.a() || std::max(x1, x2) > table.xs.back()) {
    throw Error(ErrorKind::InvalidArgument,
                "projection abscissae must differ, be >= a and lie inside the table");
  }
  const double u = order_below_top(p, table.energy);
  if (std::fabs(u - std::round(u)) <= kIntegerOrderGuard) {
    throw Error(ErrorKind::IntegerOrder, "J_{+u} and J_{-u} are dependent at integer kappa*a");
  }
  const std::size_t i1 = nearest_node(table.xs, x1);
  const std::size_t i2 = nearest_node(table.xs, x2);
  if (i1 == i2) throw Error(ErrorKind::InvalidArgument, "projection abscissae share a node");
  const double z1 = bessel_argument(p, table.xs[i1]);
  const double z2 = bessel_argument(p, table.xs[i2]);
  const double a11 = sf::bessel_j(u, z1).value;
  const double a12 = sf::bessel_j(-u, z1).value;
  const double a21 = sf::bessel_j(u, z2).value;
  const double a22 = sf::bessel_j(-u, z2).value;
  const double det = a11 * a22 - a12 * a21;
  const double row1 = std::hypot(a11, a12);
  const double row2 = std::hypot(a21, a22);
  if (std::fabs(det) < 1e-12 * row1 * row2) {
    throw Error(ErrorKind::IllConditioned, "projection system is singular at these nodes");
  }
  const double b1 = table.values[i1];
  const double b2 = table.values[i2];
  ProjectionReport r;
  r.energy = table.energy;
  r.c_plus = (b1 * a22 - a12 * b2) / det;
  r.c_minus = (a11 * b2 - b1 * a21) / det;
  const double denom = std::fabs(r.c_plus) + std::fabs(r.c_minus);
  r.residual = denom > 0.0 ? std::fabs(r.c_minus) / denom : 0.0;
  // singular values of a 2x2 matrix from its Frobenius norm and determinant
  const double fro2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det));
  const double smax = std::sqrt(0.5 * (fro2 + disc));
  const double smin = std::fabs(det) / smax;
  r.condition_number = std::max(1.0, smax / smin);
  r.x1 = table.xs[i1];
  r.x2 = table.xs[i2];
  return r;
}

ProjectionReport project_default(const ModelParams& p, const RealTable& table) {
  double x1 = 1.5 * p.a();
  double x2 = 2.5 * p.a();
  for (int attempt = 0;; ++attempt) {
    try {
      return project_onto_basis(p, table, x1, x2);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllConditioned || attempt == 3) throw;
    }
    x1 += 0.3 * p.a();
    x2 += 0.3 * p.a();
  }
}

ProjectionReport projection_at(const ModelParams& p, double energy, Parity parity) {
  const RealTable table =
      integrate_parity_ode(p, energy, parity, kProjectionReach * p.a(), 0.01 * p.a());
  return project_default(p, table);
}

std::vector<double> projection_energy_grid(const ModelParams& p, double du) {
  if (!(du > 0.0)) throw Error(ErrorKind::InvalidArgument, "du must be positive");
  std::vector<double> energies;
  for (double u = p.qa() - 0.5 * du; u > 0.0; u -= du) {
    if (std::fabs(u - std::round(u)) <= kIntegerOrderGuard) continue;
    energies.push_back(energy_of_order(p, u));
  }
  return energies;
}

std::vector<ProjectionCandidate> bic_scan_by_projection(const ModelParams& p,
                                                        const std::vector<double>& e_grid) {
  std::vector<ProjectionCandidate> out;
  if (e_grid.size() < 3) return out;
  const std::size_t n = e_grid.size();
  std::vector<double> res_even(n), res_odd(n);
  parallel_for(n, [&](std::size_t i) {
    res_even[i] = projection_at(p, e_grid[i], Parity::Even).residual;
    res_odd[i] = projection_at(p, e_grid[i], Parity::Odd).residual;
  });

  struct Seed {
    Parity parity;
    std::size_t i;
  };
  std::vector<Seed> seeds;
  for (const Parity parity : {Parity::Even, Parity::Odd}) {
    const auto& r = parity == Parity::Even ? res_even : res_odd;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (r[i] <= r[i - 1] && r[i] < r[i + 1]) seeds.push_back({parity, i});
    }
  }
  std::vector<ProjectionCandidate> refined(seeds.size());
  std::vector<char> keep(seeds.size(), 0);
  parallel_for(seeds.size(), [&](std::size_t k) {
    const Seed s = seeds[k];
    const auto f = [&](double e) { return projection_at(p, e, s.parity).residual; };
    const double e = golden_minimum(f, e_grid[s.i - 1], e_grid[s.i + 1]);
    const double r = f(e);
    refined[k] = {e, s.parity, r};
    keep[k] = r < kCandidateThreshold;
  });
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (keep[k]) out.push_back(refined[k]);
  }
  std::sort(out.begin(), out.end(), [](const ProjectionCandidate& a, const ProjectionCandidate& b) {
    return a.energy < b.energy;
  });
  return out;
}

std::vector<double> oscillation_grid(const ModelParams& p, double x_max,
                                     double points_per_wavelength) {
  if (!(x_max > 0.0) || !(points_per_wavelength > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "oscillation grid needs positive x_max and density");
  }
  // the phase of J_u(qa e^{x/a}) advances at most at rate q e^{x/a} + 1/a
  std::vector<double> half{0.0};
  const double seg = 0.25 * p.a();
  const int pieces = static_cast<int>(std::ceil(x_max / seg));
  for (int i = 0; i < pieces; ++i) {
    const double xa = x_max * i / pieces;
    const double xb = x_max * (i + 1) / pieces;
    const double k = p.q() * std::exp(xb / p.a()) + 1.0 / p.a();
    const double h = 2.0 * kPi / (points_per_wavelength * k);
    const auto n = static_cast<int>(std::ceil((xb - xa) / h));
    for (int j = 1; j <= n; ++j) half.push_back(j == n ? xb : xa + (xb - xa) * j / n);
  }
  std::vector<double> xs;
  xs.reserve(2 * half.size() - 1);
  for (std::size_t i = half.size() - 1; i >= 1; --i) xs.push_back(-half[i]);
  xs.insert(xs.end(), half.begin(), half.end());
  return xs;
}

QuadratureNorm quadrature_norm(const ModelParams& p, const RealTable& table) {
  validate(table);
  QuadratureNorm out;
  const std::size_t n = table.xs.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 3 nodes");
  const double left = table.xs.front();
  const double right = table.xs.back();
  if (right < 5.0 * p.a() * (1 - 1e-12) || -left < 5.0 * p.a() * (1 - 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "quadrature table must cover |x| <= 5a");
  }
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = table.values[i] * table.values[i];
  const double body = simpson(table.xs, f, 0, n - 1);

  // psi^2 averages to C e^{-|x|/a}; calibrate C on the last 0.5a of each side
  const double window = 0.5 * p.a();
  const auto hi_start = static_cast<std::size_t>(
      std::lower_bound(table.xs.begin(), table.xs.end(), right - window) - table.xs.begin());
  const auto lo_end = static_cast<std::size_t>(
      std::upper_bound(table.xs.begin(), table.xs.end(), left + window) - table.xs.begin() - 1);
  const double w_hi = simpson(table.xs, f, hi_start, n - 1);
  const double w_lo = simpson(table.xs, f, 0, lo_end);
  const double l_hi = right - table.xs[hi_start];
  const double l_lo = table.xs[lo_end] - left;
  const double tail_hi = w_hi / std::expm1(l_hi / p.a());
  const double tail_lo = w_lo / std::expm1(l_lo / p.a());

  out.tail = tail_hi + tail_lo;
  out.value = body + out.tail;
  out.tail_fraction = out.value > 0.0 ? out.tail / out.value : 0.0;
  out.tail_unreliable = out.tail_fraction > kTailWarning;
  return out;
}

std::vector<double> probability_current(const ComplexTable& table) {
  validate(table);
  const std::size_t n = table.xs.size();
  if (n < 5) throw Error(ErrorKind::InvalidArgument, "current needs at least 5 samples");
  const double h = (table.xs.back() - table.xs.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::fabs(table.xs[i] - table.xs[i - 1] - h) > 1e-9 * h) {
      throw Error(ErrorKind::InvalidArgument, "current needs a uniform grid");
    }
  }
  const auto& y = table.values;
  std::vector<double> j(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> d;
    if (i >= 2 && i + 2 < n) {
      d = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    } else if (i < 2) {
      // one-sided, fourth order
      d = (-25.0 * y[i] + 48.0 * y[i + 1] - 36.0 * y[i + 2] + 16.0 * y[i + 3] - 3.0 * y[i + 4]) /
          (12.0 * h);
    } else {
      d = (25.0 * y[i] - 48.0 * y[i - 1] + 36.0 * y[i - 2] - 16.0 * y[i - 3] + 3.0 * y[i - 4]) /
          (12.0 * h);
    }
    j[i] = std::imag(std::conj(y[i]) * d);
  }
  return j;
}

EnvelopeFit power_barrier_scan(double nu_exponent, double energy, double x_max) {
  if (!(nu_exponent > 2.0 && nu_exponent <= 8.0)) {
    throw Error(ErrorKind::InvalidArgument, "barrier power must lie in (2, 8]");
  }
  if (!(x_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "x_max must be positive");
  const auto g = [&](double x) { return -(std::pow(std::fabs(x), nu_exponent) + energy); };
  NumerovOptions o;
  o.base_step = 0.01;
  o.points_per_wavelength = kOdePointsPerWavelength;
  o.segment_length = 0.25;
  const NumerovResult<double> sol = integrate_numerov<double>(g, 0.0, x_max, 1.0, 0.0, o);

  std::vector<double> ex, ey;
  const auto& xs = sol.xs;
  const auto& ys = sol.psi;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double d0 = ys[i] - ys[i - 1];
    const double d1 = ys[i + 1] - ys[i];
    if (!(d0 * d1 < 0.0)) continue;
    // vertex of the parabola through the three nodes
    const double x0 = xs[i - 1], x1 = xs[i], x2 = xs[i + 1];
    const double s0 = d0 / (x1 - x0);
    const double s1 = d1 / (x2 - x1);
    const double curv = (s1 - s0) / (x2 - x0);
    const double xv = 0.5 * (x0 + x1) - s0 / (2.0 * curv);
    const double yv = ys[i] + s1 * (xv - x1) + curv * (xv - x1) * (xv - x2);
    if (xv <= 0.0) continue;  // the even start at x = 0 is not an oscillation extremum
    ex.push_back(xv);
    ey.push_back(yv);
  }
  const int count = static_cast<int>(ex.size());
  if (count < kMinExtrema) {
    std::ostringstream msg;
    msg << "found " << count << " extrema below x = " << x_max << ", need " << kMinExtrema;
    throw Error(ErrorKind::InsufficientExtrema, msg.str());
  }
  const std::size_t first = ex.size() / 4;
  std::vector<double> lx, ly;
  for (std::size_t i = first; i < ex.size(); ++i) {
    lx.push_back(std::log(ex[i]));
    ly.push_back(std::log(std::fabs(ey[i])));
  }
  const LineFit env = least_squares(lx, ly);
  std::vector<double> mx, md;
  for (std::size_t i = first; i + 1 < ex.size(); ++i) {
    mx.push_back(std::log(0.5 * (ex[i] + ex[i + 1])));
    md.push_back(std::log(ex[i + 1] - ex[i]));
  }
  const LineFit spacing = least_squares(mx, md);

  EnvelopeFit fit;
  fit.nu_exponent = nu_exponent;
  fit.fitted_envelope_power = -env.slope;
  // spacing between extrema ~ 1/phase'(x) ~ x^{1-c}
  fit.fitted_phase_power = 1.0 - spacing.slope;
  fit.fit_residual = env.rms;
  fit.extrema = count;
  return fit;
}

ScatterPoint rt_by_ode(const ModelParams& p, double energy, double x_edge) {
  if (!(energy > 0.0)) throw Error(ErrorKind::Domain, "scattering energy must be positive");
  if (!(x_edge >= p.a()) || x_edge > 8.0 * p.a()) {
    throw Error(ErrorKind::InvalidArgument, "x_edge must lie in [a, 8a]");
  }
  using cplx = std::complex<double>;
  const cplx i1(0.0, 1.0);
  // local wavenumber and its derivative; k^2 = (E - V) / h2m
  const auto k_of = [&](double x) { return std::sqrt(-ode_coefficient(p, energy, x)); };
  const auto dk_of = [&](double x) {
    const double e2 = std::exp(2.0 * std::fabs(x) / p.a());
    const double sign = x > 0.0 ? 1.0 : -1.0;
    return sign * p.v0() * e2 / (p.h2m() * p.a() * k_of(x));
  };

  const double kr = k_of(x_edge);
  const cplx psi0 = 1.0;
  const cplx dpsi0 = (i1 * kr - dk_of(x_edge) / (2.0 * kr)) * psi0;
  NumerovOptions o;
  o.base_step = 1e-4 * p.a();
  o.points_per_wavelength = 2.0 * kOdePointsPerWavelength;
  o.segment_length = 0.25 * p.a();
  o.breakpoints = {0.0};
  const auto g = [&](double x) { return ode_coefficient(p, energy, x); };
  const NumerovResult<cplx> sol = integrate_numerov<cplx>(g, x_edge, -x_edge, psi0, dpsi0, o);

  const double kl = k_of(-x_edge);
  const double dkl = dk_of(-x_edge);
  const cplx psi = sol.psi.back();
  const cplx dpsi = sol.end_derivative;
  const cplx right_moving = 0.5 * (psi + (dpsi + dkl / (2.0 * kl) * psi) / (i1 * kl));
  const cplx left_moving = psi - right_moving;
  const double incident = kl * std::norm(right_moving);
  ScatterPoint out;
  out.energy = energy;
  out.r_prob = kl * std::norm(left_moving) / incident;
  out.t_prob = kr * std::norm(psi0) / incident;
  return out;
}

}  // namespace bic1d
