#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "bic1d/model.hpp"

namespace bic1d {

struct BicState {
  int index = 0;  // 1-based, ascending energy
  Parity parity = Parity::Even;
  double energy = 0.0;
  double kappa_a = 0.0;
  double residual = 0.0;
  std::optional<double> norm_sq;
};

// J'_u(qa) for Even, J_u(qa) for Odd.
double condition(const ModelParams& p, Parity parity, double u);

// Roots of both conditions over u in (0, qa), sorted by energy.
std::vector<BicState> find_bic_spectrum(const ModelParams& p, double scan_resolution = 1e-3);

struct NormParams {
  double r = 0.0;  // order kappa*a
  double s = 0.0;  // lower limit qa
};

// int_s^inf J_r(t)^2 dt / t through the 2F3 closed form, r > 0. Falls back to
// half_line_norm_neumann when the 2F3 series loses more than ~4 digits to
// cancellation (large s).
double half_line_norm(const NormParams& np);

// Same integral as [1 - J_r(s)^2 - 2 sum_{k>=1} J_{r+k}(s)^2] / (2r), from the
// recurrences J_r^2/t = (d/dt J_r^2 + 2 J_r J_{r+1}) / (2r) and
// int_0^inf J_m J_{m+1} dt = 1/2. Needs r + 1 <= 51.
double half_line_norm_neumann(const NormParams& np);

// Full-line integral of J_r(qa e^{|x|/a})^2, i.e. 2a * half_line_norm.
double norm_sq_closed_form(const NormParams& np, double a);

// Fills norm_sq; D = 1/sqrt(norm_sq) gives a unit-norm bic_wavefunction.
BicState normalize(const ModelParams& p, const BicState& state);

inline double normalization_constant(const BicState& state) {
  return state.norm_sq ? 1.0 / std::sqrt(*state.norm_sq) : 1.0;
}

}  // namespace bic1d
