#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bic1d/cli.hpp"
#include "bic1d/error.hpp"

namespace bic1d::cli {

const char* to_string(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::ClosedForm:
      return "ClosedForm";
    case Provenance::Oracle:
      return "Oracle";
    case Provenance::Both:
      return "Both";
  }
  return "ClosedForm";
}

namespace {

std::string csv_field(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string render_csv(const ResultDocument& doc) {
  std::ostringstream os;
  for (std::size_t i = 0; i < doc.payload.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(doc.payload.columns[i]);
  }
  os << "\r\n";
  for (const json& row : doc.payload.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\r\n";
  }
  return os.str();
}

json to_json(const ResultDocument& doc, const std::string& produced_at) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = doc.command;
  out["config"] = doc.config;
  out["produced_at"] = produced_at;
  out["provenance"] = to_string(doc.provenance);
  out["payload"] = json{{"columns", doc.payload.columns}, {"rows", doc.payload.rows}};
  out["warnings"] = doc.warnings;
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

// Binds a config-file key to an option; applied only when the flag itself
// was not given on the command line.
struct Binding {
  CLI::App* owner;
  std::string flag;
  std::function<void(const json&)> assign;
};

template <typename T>
std::function<void(const json&)> assign_to(T& target) {
  return [&target](const json& v) { target = v.get<T>(); };
}

template <typename T>
std::function<void(const json&)> assign_optional(std::optional<T>& target) {
  return [&target](const json& v) { target = v.get<T>(); };
}

void apply_config(const std::string& path, CLI::App& app, CLI::App* active,
                  const std::vector<Binding>& bindings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool known = false;
    for (const Binding& b : bindings) {
      if (b.flag != flag || (b.owner != &app && b.owner != active)) continue;
      known = true;
      if (b.owner->count(flag) > 0) break;  // the command line wins
      try {
        b.assign(value);
      } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
      }
      break;
    }
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound states in the continuum of the bottomless exponential barrier", "bic1d"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  std::string config_path;
  std::vector<Binding> bindings;
  const auto bind = [&](CLI::App* owner, const std::string& flag, auto assign) {
    bindings.push_back({owner, flag, assign});
  };

  app.add_option("--v0", common.v0, "barrier scale V0 (default 50)");
  app.add_option("--a", common.a, "length scale a (default 1)");
  app.add_option("--h2m", common.h2m, "hbar^2/2m (default 1)");
  app.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", common.out, "output file (default stdout)");
  app.add_option("--config", config_path, "JSON config file; flags take precedence");
  app.add_flag("--verify", common.verify, "cross-check against the ODE oracle");
  bind(&app, "--v0", assign_to(common.v0));
  bind(&app, "--a", assign_to(common.a));
  bind(&app, "--h2m", assign_to(common.h2m));
  bind(&app, "--format", assign_to(common.format));
  bind(&app, "--out", assign_to(common.out));
  bind(&app, "--verify", assign_to(common.verify));

  SpectrumOptions spec_opt;
  auto* spectrum = app.add_subcommand("spectrum", "embedded eigenvalues and norms");
  spectrum->add_option("--resolution", spec_opt.resolution, "scan step in kappa*a (default 1e-3)");
  spectrum->add_option("--oracle-du", spec_opt.oracle_du,
                       "projection scan step in kappa*a with --verify (default 0.01)");
  bind(spectrum, "--resolution", assign_to(spec_opt.resolution));
  bind(spectrum, "--oracle-du", assign_to(spec_opt.oracle_du));

  WavefunctionOptions wf_opt;
  auto* wavefunction = app.add_subcommand("wavefunction", "sampled psi(x) table");
  wavefunction->add_option("--energy", wf_opt.energy, "energy E");
  wavefunction->add_option("--state", wf_opt.state, "1-based index into the computed spectrum");
  wavefunction->add_option("--parity", wf_opt.parity, "even or odd")
      ->check(CLI::IsMember({"even", "odd"}));
  wavefunction->add_option("--x-max", wf_opt.x_max, "grid half-width (default 3)");
  wavefunction->add_option("--samples", wf_opt.samples, "number of grid points (default 601)");
  wavefunction->add_option("--source", wf_opt.source, "closed-form or ode")
      ->check(CLI::IsMember({"closed-form", "ode"}));
  wavefunction->add_flag("--normalize", wf_opt.normalize, "unit L2 norm (closed form only)");
  bind(wavefunction, "--energy", assign_optional(wf_opt.energy));
  bind(wavefunction, "--state", assign_optional(wf_opt.state));
  bind(wavefunction, "--parity", assign_to(wf_opt.parity));
  bind(wavefunction, "--x-max", assign_to(wf_opt.x_max));
  bind(wavefunction, "--samples", assign_to(wf_opt.samples));
  bind(wavefunction, "--source", assign_to(wf_opt.source));
  bind(wavefunction, "--normalize", assign_to(wf_opt.normalize));

  ScatterOptions sc_opt;
  auto* scatter = app.add_subcommand("scatter", "reflection and transmission probabilities");
  scatter->add_option("--e-min", sc_opt.e_min, "lowest energy (default 0.5)");
  scatter->add_option("--e-max", sc_opt.e_max, "highest energy (default 49.5)");
  scatter->add_option("--steps", sc_opt.steps, "number of energies (default 200)");
  scatter->add_option("--energy", sc_opt.energy, "fixed energy; sweeps a instead of E");
  scatter->add_option("--a-min", sc_opt.a_min, "a-sweep start (default 0.2)");
  scatter->add_option("--a-max", sc_opt.a_max, "a-sweep end (default 5)");
  scatter->add_option("--a-steps", sc_opt.a_steps, "a-sweep points (default 50)");
  bind(scatter, "--e-min", assign_to(sc_opt.e_min));
  bind(scatter, "--e-max", assign_to(sc_opt.e_max));
  bind(scatter, "--steps", assign_to(sc_opt.steps));
  bind(scatter, "--energy", assign_optional(sc_opt.energy));
  bind(scatter, "--a-min", assign_to(sc_opt.a_min));
  bind(scatter, "--a-max", assign_to(sc_opt.a_max));
  bind(scatter, "--a-steps", assign_to(sc_opt.a_steps));

  PowerScanOptions ps_opt;
  auto* power = app.add_subcommand("power-scan", "envelope and phase fits for V = -|x|^nu");
  power->add_option("--nu", ps_opt.nu, "barrier powers in (2, 8] (default 2.5 3 4 5)")
      ->delimiter(',');
  power->add_option("--energy", ps_opt.energy, "energy (default 1)");
  power->add_option("--x-max", ps_opt.x_max, "integration end (default 10)");
  bind(power, "--nu", assign_to(ps_opt.nu));
  bind(power, "--energy", assign_to(ps_opt.energy));
  bind(power, "--x-max", assign_to(ps_opt.x_max));

  auto* verify = app.add_subcommand("verify", "closed form vs oracle checks; exit 1 on failure");

  SpecfunOptions sf_opt;
  auto* specfun = app.add_subcommand("specfun-eval", "point evaluation of special functions");
  specfun->group("");  // hidden from --help
  specfun->add_option("--function", sf_opt.function, "j, jp, y, h1, h2, jc, gamma, hyp2f3");
  specfun->add_option("--nu", sf_opt.nu, "order (real part)");
  specfun->add_option("--nu-im", sf_opt.nu_im, "imaginary part of the order (jc, gamma)");
  specfun->add_option("--z", sf_opt.z, "argument");
  specfun->add_option("--params", sf_opt.params, "a1,a2,b1,b2,b3 for hyp2f3")->delimiter(',');
  specfun->add_option("--w", sf_opt.w, "hyp2f3 argument");
  bind(specfun, "--function", assign_to(sf_opt.function));
  bind(specfun, "--nu", assign_to(sf_opt.nu));
  bind(specfun, "--nu-im", assign_to(sf_opt.nu_im));
  bind(specfun, "--z", assign_to(sf_opt.z));
  bind(specfun, "--params", assign_to(sf_opt.params));
  bind(specfun, "--w", assign_to(sf_opt.w));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  ResultDocument doc;
  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config(config_path, app, active, bindings);
    if (common.format != "csv" && common.format != "json") {
      throw ConfigError("format must be csv or json");
    }
    if (active == spectrum) {
      doc = cmd_spectrum(common, spec_opt);
    } else if (active == wavefunction) {
      doc = cmd_wavefunction(common, wf_opt);
    } else if (active == scatter) {
      doc = cmd_scatter(common, sc_opt);
    } else if (active == power) {
      doc = cmd_power_scan(common, ps_opt);
    } else if (active == verify) {
      doc = cmd_verify(common);
    } else {
      doc = cmd_specfun_eval(common, sf_opt);
    }
  } catch (const ConfigError& e) {
    err << "bic1d: invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const Error& e) {
    err << "bic1d: " << e.what() << "\n";
    return e.kind() == ErrorKind::NotAnEigenvalue ? kExitNotAnEigenvalue : kExitNumerical;
  }

  const std::string text = common.format == "json"
                               ? to_json(doc, utc_timestamp()).dump(2) + "\n"
                               : render_csv(doc);
  if (common.out.empty()) {
    out << text;
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
      err << "bic1d: cannot write " << common.out << "\n";
      return kExitInvalidConfig;
    }
    file << text;
  }
  for (const std::string& w : doc.warnings) err << "bic1d: warning: " << w << "\n";
  return doc.exit_code;
}

}  // namespace bic1d::cli
