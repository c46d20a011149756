#pragma once

#include <vector>

#include "bic1d/model.hpp"
#include "bic1d/numerov.hpp"
#include "bic1d/scattering.hpp"

namespace bic1d {

// (V(x) - E) / h2m, so that psi'' = g psi.
double ode_coefficient(const ModelParams& p, double energy, double x);

inline constexpr double kOdePointsPerWavelength = 200.0;

// Numerov from x = 0 with parity initial data, mirrored onto [-x_max, 0].
// x_max <= 8a.
RealTable integrate_parity_ode(const ModelParams& p, double energy, Parity parity, double x_max,
                               double base_step,
                               double points_per_wavelength = kOdePointsPerWavelength);

// Scales the ODE table to the closed-form state J_u at the node nearest
// x = 0.1a and returns max |psi_cf - s psi_ode| / max |psi_cf| over |x| <= x_limit.
double closed_form_deviation(const ModelParams& p, const RealTable& ode, double u, Parity parity,
                             double x_limit);

struct ProjectionReport {
  double energy = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  double residual = 0.0;          // |c-| / (|c+| + |c-|)
  double condition_number = 1.0;  // 2-norm, of the 2x2 system
  double x1 = 0.0;                // nodes actually used
  double x2 = 0.0;
};

// Fits psi = c+ J_u(z) + c- J_{-u}(z) at the table nodes nearest x1 and x2.
ProjectionReport project_onto_basis(const ModelParams& p, const RealTable& table, double x1,
                                    double x2);

// Default nodes 1.5a and 2.5a, shifted by +0.3a (up to three times) when the
// system is ill-conditioned. The table must reach 3.4a.
ProjectionReport project_default(const ModelParams& p, const RealTable& table);

// Integrate to 3.5a and project.
ProjectionReport projection_at(const ModelParams& p, double energy, Parity parity);

struct ProjectionCandidate {
  double energy = 0.0;
  Parity parity = Parity::Even;
  double residual = 0.0;
};

// Energies uniform in kappa*a with spacing du, ascending in E, skipping
// orders within 1e-6 of an integer.
std::vector<double> projection_energy_grid(const ModelParams& p, double du = 0.01);

// Local minima of the residual over e_grid (per parity), refined by
// golden-section search; kept when the refined residual is below 1e-3.
std::vector<ProjectionCandidate> bic_scan_by_projection(const ModelParams& p,
                                                        const std::vector<double>& e_grid);

// Symmetric grid resolving the oscillation of J_u(qa e^{|x|/a}) with at least
// points_per_wavelength nodes per local wavelength. Contains x = 0.
std::vector<double> oscillation_grid(const ModelParams& p, double x_max,
                                     double points_per_wavelength = 200.0);

struct QuadratureNorm {
  double value = 0.0;          // full-line integral of psi^2, tails included
  double tail = 0.0;           // both tails
  double tail_fraction = 0.0;  // tail / value
  bool tail_unreliable = false;
};

// Irregular-grid Simpson on the table plus an e^{-|x|/a} envelope tail beyond
// each end, scaled from the last 0.5a of data. Needs x_max >= 5a.
QuadratureNorm quadrature_norm(const ModelParams& p, const RealTable& table);

// j = Im(conj(psi) psi') with fourth-order differences on a uniform grid
// (h2m = 1 units; multiply by hbar/m otherwise).
std::vector<double> probability_current(const ComplexTable& table);

struct EnvelopeFit {
  double nu_exponent = 0.0;
  double fitted_envelope_power = 0.0;  // b in |psi|_env ~ |x|^-b
  double fitted_phase_power = 0.0;     // c in phase ~ |x|^c
  double fit_residual = 0.0;           // rms of the log-envelope fit
  int extrema = 0;
};

// psi'' + (|x|^nu + E) psi = 0 from x = 0 with even data, extrema fitted over
// the outer 75%. Needs 2 < nu <= 8 and at least 12 extrema.
EnvelopeFit power_barrier_scan(double nu_exponent, double energy, double x_max);

// R, T from a complex Numerov solution: pure outgoing WKB wave at +x_edge,
// integrated to -x_edge and split into incident and reflected WKB waves.
ScatterPoint rt_by_ode(const ModelParams& p, double energy, double x_edge);

}  // namespace bic1d
