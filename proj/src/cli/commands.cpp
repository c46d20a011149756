#include <algorithm>
#include <cmath>
#include <sstream>

#include "bic1d/cli.hpp"
#include "bic1d/error.hpp"
#include "bic1d/oracle.hpp"
#include "bic1d/scattering.hpp"
#include "bic1d/specfun.hpp"
#include "bic1d/spectrum.hpp"

namespace bic1d::cli {

namespace {

ModelParams params_of(const CommonOptions& c) {
  try {
    return make_params(c.v0, c.a, c.h2m);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

json config_echo(const CommonOptions& c) {
  return json{{"v0", c.v0}, {"a", c.a}, {"h2m", c.h2m}, {"verify", c.verify}};
}

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::Even;
  if (s == "odd") return Parity::Odd;
  throw ConfigError("parity must be 'even' or 'odd' (got '" + s + "')");
}

json number_or_null(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

// Cubic Lagrange interpolation on the four table nodes around x.
double interpolate(const RealTable& t, double x) {
  const auto it = std::lower_bound(t.xs.begin(), t.xs.end(), x);
  auto i = static_cast<std::ptrdiff_t>(it - t.xs.begin());
  if (i < static_cast<std::ptrdiff_t>(t.xs.size()) && t.xs[static_cast<std::size_t>(i)] == x) {
    return t.values[static_cast<std::size_t>(i)];
  }
  const auto n = static_cast<std::ptrdiff_t>(t.xs.size());
  const std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(i - 2, 0, n - 4);
  double sum = 0.0;
  for (std::ptrdiff_t j = first; j < first + 4; ++j) {
    double w = 1.0;
    for (std::ptrdiff_t k = first; k < first + 4; ++k) {
      if (k != j) {
        w *= (x - t.xs[static_cast<std::size_t>(k)]) /
             (t.xs[static_cast<std::size_t>(j)] - t.xs[static_cast<std::size_t>(k)]);
      }
    }
    sum += w * t.values[static_cast<std::size_t>(j)];
  }
  return sum;
}

}  // namespace

ResultDocument cmd_spectrum(const CommonOptions& common, const SpectrumOptions& opt) {
  const ModelParams p = params_of(common);
  if (!(opt.resolution > 1e-6 && opt.resolution < 1e-1)) {
    throw ConfigError("--resolution must lie in (1e-6, 1e-1)");
  }
  if (!(opt.oracle_du > 0.0 && opt.oracle_du <= 0.1)) {
    throw ConfigError("--oracle-du must lie in (0, 0.1]");
  }
  ResultDocument doc;
  doc.command = "spectrum";
  doc.config = config_echo(common);
  doc.config["resolution"] = opt.resolution;
  doc.provenance = common.verify ? Provenance::Both : Provenance::ClosedForm;
  doc.payload.columns = {"index", "parity",   "energy",          "kappa_a",
                         "residual", "norm_sq", "oracle_residual", "oracle_energy"};

  const std::vector<BicState> states = find_bic_spectrum(p, opt.resolution);
  std::vector<ProjectionCandidate> candidates;
  if (common.verify) {
    doc.config["oracle_du"] = opt.oracle_du;
    candidates = bic_scan_by_projection(p, projection_energy_grid(p, opt.oracle_du));
  }
  for (const BicState& raw : states) {
    const BicState s = normalize(p, raw);
    std::optional<double> oracle_residual;
    std::optional<double> oracle_energy;
    if (common.verify) {
      oracle_residual = projection_at(p, s.energy, s.parity).residual;
      double best = INFINITY;
      for (const ProjectionCandidate& c : candidates) {
        if (c.parity == s.parity && std::fabs(c.energy - s.energy) < best) {
          best = std::fabs(c.energy - s.energy);
          oracle_energy = c.energy;
        }
      }
    }
    doc.payload.rows.push_back(json::array({s.index, to_string(s.parity), s.energy, s.kappa_a,
                                            s.residual, *s.norm_sq, number_or_null(oracle_residual),
                                            number_or_null(oracle_energy)}));
  }
  if (common.verify && candidates.size() != states.size()) {
    std::ostringstream msg;
    msg << "projection scan found " << candidates.size() << " candidates for " << states.size()
        << " states";
    doc.warnings.push_back(msg.str());
  }
  return doc;
}

ResultDocument cmd_wavefunction(const CommonOptions& common, const WavefunctionOptions& opt) {
  const ModelParams p = params_of(common);
  if (opt.samples < 2) throw ConfigError("--samples must be at least 2");
  if (!(opt.x_max > 0.0)) throw ConfigError("--x-max must be positive");
  if (opt.source != "closed-form" && opt.source != "ode") {
    throw ConfigError("--source must be 'closed-form' or 'ode'");
  }
  if (opt.energy.has_value() == opt.state.has_value()) {
    throw ConfigError("give exactly one of --energy and --state");
  }
  const bool ode = opt.source == "ode";
  if (ode && opt.normalize) throw ConfigError("--normalize applies to the closed-form source");
  if (ode && opt.x_max > 8.0 * p.a()) throw ConfigError("--x-max must not exceed 8a for ode");

  double energy = 0.0;
  Parity parity = Parity::Even;
  double d = 1.0;
  std::optional<BicState> state;
  if (opt.state) {
    const std::vector<BicState> states = find_bic_spectrum(p);
    if (*opt.state < 1 || *opt.state > static_cast<int>(states.size())) {
      std::ostringstream msg;
      msg << "--state " << *opt.state << " outside 1.." << states.size();
      throw ConfigError(msg.str());
    }
    state = states[static_cast<std::size_t>(*opt.state - 1)];
    energy = state->energy;
    parity = state->parity;
    if (!opt.parity.empty() && parse_parity(opt.parity) != parity) {
      throw ConfigError("--parity contradicts the parity of the requested state");
    }
  } else {
    energy = *opt.energy;
    if (opt.parity.empty()) throw ConfigError("--parity is required with --energy");
    parity = parse_parity(opt.parity);
    if (!(energy > 0.0) || (!ode && !(energy < p.v0()))) {
      throw ConfigError("--energy must lie in (0, v0) for the closed form and be positive for ode");
    }
  }

  ResultDocument doc;
  doc.command = "wavefunction";
  doc.config = config_echo(common);
  doc.config["energy"] = energy;
  doc.config["parity"] = to_string(parity);
  doc.config["state"] = opt.state ? json(*opt.state) : json(nullptr);
  doc.config["x_max"] = opt.x_max;
  doc.config["samples"] = opt.samples;
  doc.config["source"] = opt.source;
  doc.config["normalize"] = opt.normalize;
  doc.provenance = ode ? Provenance::Oracle : Provenance::ClosedForm;
  doc.payload.columns = {"x", "psi", "psi_squared"};

  const std::vector<double> xs = symmetric_grid(opt.x_max, opt.samples);
  std::vector<double> values;
  values.reserve(xs.size());
  if (ode) {
    const RealTable table = integrate_parity_ode(p, energy, parity, opt.x_max, 0.01 * p.a());
    for (const double x : xs) values.push_back(interpolate(table, x));
  } else {
    const double u = state ? state->kappa_a : order_below_top(p, energy);
    if (!state) {
      // raises NotAnEigenvalue when E misses the quantization condition
      (void)bic_wavefunction(p, energy, parity, 0.0);
    }
    if (opt.normalize) {
      d = 1.0 / std::sqrt(norm_sq_closed_form({u, p.qa()}, p.a()));
      doc.config["d"] = d;
    }
    for (const double x : xs) values.push_back(bic_wavefunction_at_order(p, u, parity, x, d));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    doc.payload.rows.push_back(json::array({xs[i], values[i], values[i] * values[i]}));
  }
  return doc;
}

ResultDocument cmd_scatter(const CommonOptions& common, const ScatterOptions& opt) {
  const ModelParams base = params_of(common);
  ResultDocument doc;
  doc.command = "scatter";
  doc.config = config_echo(common);
  doc.provenance = common.verify ? Provenance::Both : Provenance::ClosedForm;
  int failures = 0;
  const auto ode_r = [&](const ModelParams& p, double e) -> json {
    if (!common.verify) return nullptr;
    try {
      return rt_by_ode(p, e, 6.0 * p.a()).r_prob;
    } catch (const Error&) {
      return nullptr;
    }
  };

  if (opt.energy) {
    if (!(*opt.energy > 0.0)) throw ConfigError("--energy must be positive");
    if (!(opt.a_min > 0.0) || !(opt.a_max > opt.a_min) || opt.a_steps < 2) {
      throw ConfigError("a-sweep needs 0 < --a-min < --a-max and --a-steps >= 2");
    }
    doc.config["energy"] = *opt.energy;
    doc.config["a_min"] = opt.a_min;
    doc.config["a_max"] = opt.a_max;
    doc.config["a_steps"] = opt.a_steps;
    doc.payload.columns = {"a", "energy", "R", "T", "R_plus_T", "status", "R_ode"};
    for (int i = 0; i < opt.a_steps; ++i) {
      const double a = i + 1 == opt.a_steps
                           ? opt.a_max
                           : opt.a_min + (opt.a_max - opt.a_min) * i / (opt.a_steps - 1);
      const ModelParams p = make_params(common.v0, a, common.h2m);
      try {
        const ScatterPoint sp = rt_coefficients(p, *opt.energy);
        doc.payload.rows.push_back(json::array({a, *opt.energy, sp.r_prob, sp.t_prob,
                                                sp.r_prob + sp.t_prob, "ok",
                                                ode_r(p, *opt.energy)}));
      } catch (const Error& e) {
        ++failures;
        doc.payload.rows.push_back(
            json::array({a, *opt.energy, nullptr, nullptr, nullptr, e.what(), nullptr}));
      }
    }
  } else {
    if (!(opt.e_min > 0.0) || !(opt.e_max > opt.e_min) || opt.steps < 2) {
      throw ConfigError("energy scan needs 0 < --e-min < --e-max and --steps >= 2");
    }
    doc.config["e_min"] = opt.e_min;
    doc.config["e_max"] = opt.e_max;
    doc.config["steps"] = opt.steps;
    doc.payload.columns = {"energy", "R", "T", "R_plus_T", "status", "R_ode"};
    for (const ScanEntry& entry : rt_scan(base, opt.e_min, opt.e_max, opt.steps)) {
      const ScatterPoint& sp = entry.point;
      if (entry.ok) {
        doc.payload.rows.push_back(json::array({sp.energy, sp.r_prob, sp.t_prob,
                                                sp.r_prob + sp.t_prob, "ok",
                                                ode_r(base, sp.energy)}));
      } else {
        ++failures;
        doc.payload.rows.push_back(
            json::array({sp.energy, nullptr, nullptr, nullptr, entry.error, nullptr}));
      }
    }
  }
  const auto total = doc.payload.rows.size();
  if (failures > 0) {
    std::ostringstream msg;
    msg << failures << " of " << total << " points failed";
    doc.warnings.push_back(msg.str());
  }
  // partial scans are fine as long as 90% of the points succeed
  if (10 * static_cast<std::size_t>(failures) > total) doc.exit_code = kExitNumerical;
  return doc;
}

ResultDocument cmd_power_scan(const CommonOptions& common, const PowerScanOptions& opt) {
  if (opt.nu.empty()) throw ConfigError("--nu needs at least one value");
  for (const double nu : opt.nu) {
    if (!(nu > 2.0 && nu <= 8.0)) throw ConfigError("--nu values must lie in (2, 8]");
  }
  if (!(opt.x_max > 0.0)) throw ConfigError("--x-max must be positive");
  ResultDocument doc;
  doc.command = "power-scan";
  doc.config = config_echo(common);
  doc.config["nu"] = opt.nu;
  doc.config["energy"] = opt.energy;
  doc.config["x_max"] = opt.x_max;
  doc.provenance = Provenance::Oracle;
  doc.payload.columns = {"nu",           "envelope_power", "envelope_expected", "phase_power",
                         "phase_wkb",    "fit_residual",   "extrema",           "status"};
  for (const double nu : opt.nu) {
    try {
      const EnvelopeFit f = power_barrier_scan(nu, opt.energy, opt.x_max);
      doc.payload.rows.push_back(json::array({nu, f.fitted_envelope_power, nu / 4.0,
                                              f.fitted_phase_power, (nu + 2.0) / 2.0,
                                              f.fit_residual, f.extrema, "ok"}));
    } catch (const Error& e) {
      doc.payload.rows.push_back(
          json::array({nu, nullptr, nu / 4.0, nullptr, (nu + 2.0) / 2.0, nullptr, nullptr, e.what()}));
    }
  }
  return doc;
}

ResultDocument cmd_verify(const CommonOptions& common) {
  const ModelParams p = params_of(common);
  ResultDocument doc;
  doc.command = "verify";
  doc.config = config_echo(common);
  doc.provenance = Provenance::Both;
  doc.payload.columns = {"check", "subject", "value", "tolerance", "pass"};
  bool all = true;
  const auto add = [&](const std::string& check, const std::string& subject, double value,
                       double tol) {
    const bool pass = std::isfinite(value) && value <= tol;
    all = all && pass;
    doc.payload.rows.push_back(json::array({check, subject, value, tol, pass}));
  };

  const std::vector<BicState> states = find_bic_spectrum(p);
  const auto candidates = bic_scan_by_projection(p, projection_energy_grid(p));
  add("oracle_state_count", "all",
      std::fabs(static_cast<double>(candidates.size()) - static_cast<double>(states.size())), 0.0);
  const double x_limit = std::min(3.0 * p.a(), 8.0 * p.a());
  for (const BicState& s : states) {
    const std::string subject = "state " + std::to_string(s.index);
    add("condition_residual", subject, s.residual, 1e-8);
    add("projection_residual", subject, projection_at(p, s.energy, s.parity).residual, 1e-4);
    double gap = INFINITY;
    for (const ProjectionCandidate& c : candidates) {
      if (c.parity == s.parity) gap = std::min(gap, std::fabs(c.energy - s.energy));
    }
    add("oracle_energy_gap", subject, gap, 1e-4);
    const double closed = norm_sq_closed_form({s.kappa_a, p.qa()}, p.a());
    const RealTable cf = bic_table(p, s.kappa_a, s.parity, oscillation_grid(p, 8.0 * p.a()));
    const double quad = quadrature_norm(p, cf).value;
    add("norm_closed_vs_quadrature", subject, std::fabs(quad - closed) / closed, 1e-6);
    const RealTable ode = integrate_parity_ode(p, s.energy, s.parity, x_limit, 0.01 * p.a());
    add("closed_form_vs_ode", subject, closed_form_deviation(p, ode, s.kappa_a, s.parity, x_limit),
        1e-6);
  }
  double worst = 0.0;
  for (const ScanEntry& e : rt_scan(p, 0.01 * p.v0(), 0.99 * p.v0(), 50)) {
    worst = std::max(worst, e.ok ? std::fabs(e.point.r_prob + e.point.t_prob - 1.0) : INFINITY);
  }
  add("flux_conservation", "50 energies below v0", worst, 1e-8);
  for (const double frac : {0.2, 0.5, 1.2}) {
    const double e = frac * p.v0();
    const double r = rt_coefficients(p, e).r_prob;
    const double r_ode = rt_by_ode(p, e, 6.0 * p.a()).r_prob;
    std::ostringstream subject;
    subject << "E = " << e;
    add("scatter_vs_ode", subject.str(), std::fabs(r - r_ode), 1e-6);
  }
  if (!all) doc.exit_code = kExitCheckFailed;
  return doc;
}

ResultDocument cmd_specfun_eval(const CommonOptions& common, const SpecfunOptions& opt) {
  namespace sf = specfun;
  ResultDocument doc;
  doc.command = "specfun-eval";
  doc.config = config_echo(common);
  doc.config["function"] = opt.function;
  doc.config["nu"] = opt.nu;
  doc.config["nu_im"] = opt.nu_im;
  doc.config["z"] = opt.z;
  doc.provenance = Provenance::ClosedForm;
  doc.payload.columns = {"function", "value_re", "value_im", "abs_err", "regime"};
  sf::ComplexResult r;
  const auto real = [](const sf::RealResult& x) {
    return sf::ComplexResult{x.value, x.abs_err, x.regime};
  };
  const std::string& f = opt.function;
  if (f == "j") {
    r = real(sf::bessel_j(opt.nu, opt.z));
  } else if (f == "jp") {
    r = real(sf::bessel_j_prime(opt.nu, opt.z));
  } else if (f == "y") {
    r = real(sf::bessel_y(opt.nu, opt.z));
  } else if (f == "h1" || f == "h2") {
    r = sf::hankel(f == "h1" ? sf::HankelKind::H1 : sf::HankelKind::H2, opt.nu, opt.z);
  } else if (f == "jc") {
    r = sf::bessel_j_complex_order({opt.nu, opt.nu_im}, opt.z);
  } else if (f == "gamma") {
    r = opt.nu_im == 0.0 ? real(sf::gamma(opt.nu)) : sf::gamma(sf::cplx(opt.nu, opt.nu_im));
  } else if (f == "hyp2f3") {
    if (opt.params.size() != 5) throw ConfigError("hyp2f3 needs --params a1,a2,b1,b2,b3");
    doc.config["params"] = opt.params;
    doc.config["w"] = opt.w;
    const auto& q = opt.params;
    r = real(sf::hyp2f3(q[0], q[1], q[2], q[3], q[4], opt.w));
  } else {
    throw ConfigError("unknown --function '" + f + "' (j, jp, y, h1, h2, jc, gamma, hyp2f3)");
  }
  doc.payload.rows.push_back(
      json::array({f, r.value.real(), r.value.imag(), r.abs_err, sf::to_string(r.regime)}));
  return doc;
}

}  // namespace bic1d::cli
