#include "bic1d/numerov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "bic1d/error.hpp"

namespace bic1d {

namespace {

constexpr int kStartSubsteps = 32;
constexpr int kWavenumberSamples = 9;

template <typename T>
struct State {
  T psi;
  T dpsi;
};

template <typename T>
State<T> rk4(const std::function<double(double)>& g, double x, State<T> s, double h) {
  const double dh = h / kStartSubsteps;
  for (int i = 0; i < kStartSubsteps; ++i) {
    const double xa = x + i * dh;
    const double gm = g(xa + 0.5 * dh);
    const T k1p = s.dpsi;
    const T k1d = g(xa) * s.psi;
    const T k2p = s.dpsi + 0.5 * dh * k1d;
    const T k2d = gm * (s.psi + 0.5 * dh * k1p);
    const T k3p = s.dpsi + 0.5 * dh * k2d;
    const T k3d = gm * (s.psi + 0.5 * dh * k2p);
    const T k4p = s.dpsi + dh * k3d;
    const T k4d = g(xa + dh) * (s.psi + dh * k3p);
    s.psi += dh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    s.dpsi += dh / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  }
  return s;
}

double max_wavenumber(const std::function<double(double)>& g, double xa, double xb) {
  double k = 0.0;
  for (int i = 0; i < kWavenumberSamples; ++i) {
    const double x = xa + (xb - xa) * i / (kWavenumberSamples - 1);
    k = std::max(k, std::sqrt(std::fabs(g(x))));
  }
  return k;
}

}  // namespace

template <typename T>
NumerovResult<T> integrate_numerov(const std::function<double(double)>& g, double x0, double x1,
                                   T psi0, T dpsi0, const NumerovOptions& options) {
  if (!(options.base_step > 0.0) || !(options.points_per_wavelength > 0.0) ||
      !(options.segment_length > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Numerov options must be positive");
  }
  if (x0 == x1) throw Error(ErrorKind::InvalidArgument, "empty integration interval");
  const double dir = x1 > x0 ? 1.0 : -1.0;

  // segment ends
  std::vector<double> ends;
  for (const double b : options.breakpoints) {
    if ((b - x0) * dir > 0.0 && (x1 - b) * dir > 0.0) ends.push_back(b);
  }
  ends.push_back(x1);
  std::sort(ends.begin(), ends.end(), [dir](double l, double r) { return l * dir < r * dir; });

  NumerovResult<T> out;
  out.xs.push_back(x0);
  out.psi.push_back(psi0);
  State<T> state{psi0, dpsi0};
  double x = x0;

  for (const double stop : ends) {
    const double span = std::fabs(stop - x);
    const int pieces = std::max(1, static_cast<int>(std::ceil(span / options.segment_length)));
    for (int piece = 0; piece < pieces; ++piece) {
      const double xe = piece == pieces - 1 ? stop : x + dir * span / pieces;
      const double len = std::fabs(xe - x);
      const double k = max_wavenumber(g, x, xe);
      double h = options.base_step;
      if (k > 0.0) h = std::min(h, 2.0 * std::numbers::pi / (options.points_per_wavelength * k));
      const double steps_d = std::ceil(len / h);
      if (steps_d + static_cast<double>(out.xs.size()) > static_cast<double>(options.max_points)) {
        std::ostringstream msg;
        msg << "step refinement needs more than " << options.max_points << " points near x = " << x;
        throw Error(ErrorKind::StepUnderflow, msg.str());
      }
      auto n = static_cast<std::size_t>(steps_d);
      if (n < 2) n = 2;
      if (n % 2 == 1) ++n;
      h = dir * len / static_cast<double>(n);

      out.segment_starts.push_back(out.xs.size() - 1);
      const double h2 = h * h / 12.0;
      // g at the segment nodes 0..n plus one node past the end
      std::vector<double> gs(n + 2);
      for (std::size_t i = 0; i <= n + 1; ++i) gs[i] = g(x + static_cast<double>(i) * h);

      const State<T> first = rk4(g, x, state, h);
      out.xs.push_back(x + h);
      out.psi.push_back(first.psi);
      T prev = state.psi;
      T cur = first.psi;
      T next{};
      for (std::size_t i = 1; i <= n; ++i) {
        next = (2.0 * cur * (1.0 + 5.0 * h2 * gs[i]) - prev * (1.0 - h2 * gs[i - 1])) /
               (1.0 - h2 * gs[i + 1]);
        if (i < n) {
          out.xs.push_back(i + 1 == n ? xe : x + static_cast<double>(i + 1) * h);
          out.psi.push_back(next);
          prev = cur;
          cur = next;
        }
      }
      // cur = psi at xe, prev = psi one step before, next = one step past
      const double c = h * h / 6.0;
      state.psi = cur;
      state.dpsi = ((1.0 - c * gs[n + 1]) * next - (1.0 - c * gs[n - 1]) * prev) / (2.0 * h);
      x = xe;
    }
  }
  out.end_derivative = state.dpsi;
  return out;
}

template NumerovResult<double> integrate_numerov(const std::function<double(double)>&, double,
                                                 double, double, double, const NumerovOptions&);
template NumerovResult<std::complex<double>> integrate_numerov(
    const std::function<double(double)>&, double, double, std::complex<double>,
    std::complex<double>, const NumerovOptions&);

}  // namespace bic1d
