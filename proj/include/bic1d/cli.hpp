#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bic1d::cli {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0.0";

enum class Provenance { ClosedForm, Oracle, Both };
const char* to_string(Provenance provenance) noexcept;

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitNotAnEigenvalue = 4;

struct Table {
  std::vector<std::string> columns;
  std::vector<json> rows;  // each row a JSON array, same length as columns
};

struct ResultDocument {
  std::string command;
  json config;
  Provenance provenance = Provenance::ClosedForm;
  Table payload;
  std::vector<std::string> warnings;
  int exit_code = kExitOk;  // non-zero for verify failures and partial scans
};

struct CommonOptions {
  double v0 = 50.0;
  double a = 1.0;
  double h2m = 1.0;
  std::string format = "csv";
  std::string out;
  bool verify = false;
};

struct SpectrumOptions {
  double resolution = 1e-3;
  double oracle_du = 0.01;
};

struct WavefunctionOptions {
  std::optional<double> energy;
  std::optional<int> state;
  std::string parity;  // "even", "odd" or empty
  double x_max = 3.0;
  int samples = 601;
  std::string source = "closed-form";
  bool normalize = false;
};

struct ScatterOptions {
  double e_min = 0.5;
  double e_max = 49.5;
  int steps = 200;
  std::optional<double> energy;  // fixed energy: sweep a instead
  double a_min = 0.2;
  double a_max = 5.0;
  int a_steps = 50;
};

struct PowerScanOptions {
  std::vector<double> nu{2.5, 3.0, 4.0, 5.0};
  double energy = 1.0;
  double x_max = 10.0;
};

struct SpecfunOptions {
  std::string function = "j";
  double nu = 0.0;
  double nu_im = 0.0;
  double z = 1.0;
  std::vector<double> params;  // a1, a2, b1, b2, b3 for hyp2f3
  double w = 0.0;
};

// Each command validates its options (throwing ConfigError) before computing.
ResultDocument cmd_spectrum(const CommonOptions& common, const SpectrumOptions& opt);
ResultDocument cmd_wavefunction(const CommonOptions& common, const WavefunctionOptions& opt);
ResultDocument cmd_scatter(const CommonOptions& common, const ScatterOptions& opt);
ResultDocument cmd_power_scan(const CommonOptions& common, const PowerScanOptions& opt);
ResultDocument cmd_verify(const CommonOptions& common);
ResultDocument cmd_specfun_eval(const CommonOptions& common, const SpecfunOptions& opt);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string render_csv(const ResultDocument& doc);
json to_json(const ResultDocument& doc, const std::string& produced_at);
std::string utc_timestamp();

// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bic1d::cli
