#pragma once

#include <functional>
#include <vector>

namespace bic1d {

// psi'' = g(x) psi on [x0, x1] (x1 < x0 integrates backwards).
//
// The interval is cut into segments at the breakpoints and at roughly
// segment_length spacing. Inside a segment the step is constant:
//   h = min(base_step, 2 pi / (points_per_wavelength * k_max))
// with k_max the largest local wavenumber sqrt(|g|) on the segment, then
// shrunk so the segment holds an even number of steps. Each segment starts
// with one RK4 step (32 substeps) from (psi, psi') and continues with the
// Numerov recurrence; psi' at the segment end comes from the fourth-order
// Numerov derivative formula, using one extra step past the end.
struct NumerovOptions {
  double base_step = 1e-2;
  double points_per_wavelength = 200.0;
  double segment_length = 0.25;
  std::vector<double> breakpoints;  // forced segment ends, e.g. a cusp
  std::size_t max_points = 10'000'000;
};

template <typename T>
struct NumerovResult {
  std::vector<double> xs;
  std::vector<T> psi;
  std::vector<std::size_t> segment_starts;  // index of each segment's first node
  T end_derivative{};
};

template <typename T>
NumerovResult<T> integrate_numerov(const std::function<double(double)>& g, double x0, double x1,
                                   T psi0, T dpsi0, const NumerovOptions& options);

}  // namespace bic1d
