#pragma once

#include <string>
#include <vector>

#include "bic1d/model.hpp"

namespace bic1d {

struct ScatterPoint {
  double energy = 0.0;
  double r_prob = 0.0;
  double t_prob = 0.0;
};

enum class Incidence { FromLeft, FromRight };

// Hankel-wave matching at x = 0. Real order below the barrier top, imaginary
// order above it. Within 1e-6 of an integer kappa*a the result is the average
// of the two orders nudged by +-1e-9.
ScatterPoint rt_coefficients(const ModelParams& p, double energy,
                             Incidence incidence = Incidence::FromLeft);

struct ScanEntry {
  ScatterPoint point;
  bool ok = true;
  std::string error;  // set when ok is false
};

// steps energies uniform on [e_min, e_max]; failures are flagged per point.
std::vector<ScanEntry> rt_scan(const ModelParams& p, double e_min, double e_max, int steps);

}  // namespace bic1d
