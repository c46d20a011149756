#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bic1d/cli.hpp"

using namespace bic1d::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bic1d");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& csv) {
  std::vector<std::string> result;
  std::size_t start = 0;
  while (start < csv.size()) {
    const std::size_t end = csv.find("\r\n", start);
    if (end == std::string::npos) {
      result.push_back(csv.substr(start));
      break;
    }
    result.push_back(csv.substr(start, end - start));
    start = end + 2;
  }
  return result;
}

json invoke_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const Run r = invoke(args);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("spectrum of the default barrier") {
  const json doc = invoke_json({"spectrum", "--v0", "50", "--a", "1"});
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["command"] == "spectrum");
  CHECK(doc["provenance"] == "ClosedForm");
  const auto& cols = doc["payload"]["columns"];
  CHECK(cols[0] == "index");
  CHECK(cols[2] == "energy");
  const auto& rows = doc["payload"]["rows"];
  REQUIRE(rows.size() == 5);
  const double printed[] = {18.6108, 37.2630, 44.8253, 48.9214, 49.9988};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(rows[i][1] == (i % 2 == 0 ? "even" : "odd"));
    CHECK(std::abs(rows[i][2].get<double>() - printed[i]) < 5e-3);
    CHECK(rows[i][6].is_null());
  }
}

TEST_CASE("spectrum --verify fills the oracle columns") {
  const json doc = invoke_json({"spectrum", "--verify"});
  CHECK(doc["provenance"] == "Both");
  for (const auto& row : doc["payload"]["rows"]) {
    CHECK(row[6].get<double>() <= 1e-4);
    CHECK(std::abs(row[7].get<double>() - row[2].get<double>()) < 1e-4);
  }
}

TEST_CASE("tiny qa still yields its single even state") {
  const Run r = invoke({"spectrum", "--v0", "0.1", "--a", "0.1"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[1].rfind("1,even,", 0) == 0);
}

TEST_CASE("payload is deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"spectrum"}, {"scatter", "--steps", "20"},
        {"wavefunction", "--state", "1", "--samples", "31"}, {"power-scan", "--nu", "4"}}) {
    const Run a = invoke(args);
    const Run b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto ja = invoke_json(args);
    auto jb = invoke_json(args);
    ja.erase("produced_at");
    jb.erase("produced_at");
    CHECK(ja.dump() == jb.dump());
  }
}

TEST_CASE("csv formatting") {
  const Run r = invoke({"spectrum"});
  const auto ls = lines(r.out);
  CHECK(ls[0] == "index,parity,energy,kappa_a,residual,norm_sq,oracle_residual,oracle_energy");
  // 17 significant digits survive a round trip
  std::vector<std::string> fields;
  std::stringstream ss(ls[1]);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  REQUIRE(fields.size() >= 6);
  const json doc = invoke_json({"spectrum"});
  CHECK(std::stod(fields[2]) == doc["payload"]["rows"][0][2].get<double>());

  ResultDocument d;
  d.command = "verify";
  d.payload.columns = {"check", "subject"};
  d.payload.rows.push_back(json::array({"a,b", "say \"hi\""}));
  d.payload.rows.push_back(json::array({nullptr, true}));
  CHECK(render_csv(d) == "check,subject\r\n\"a,b\",\"say \"\"hi\"\"\"\r\n,true\r\n");
}

TEST_CASE("wavefunction tables") {
  SUBCASE("two samples are the endpoints") {
    const Run r = invoke({"wavefunction", "--state", "1", "--samples", "2"});
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[1].rfind("-3,", 0) == 0);
    CHECK(ls[2].rfind("3,", 0) == 0);
  }
  SUBCASE("odd state passes through zero at the origin") {
    const json doc = invoke_json({"wavefunction", "--energy", "37.2630", "--parity", "odd"});
    bool found = false;
    for (const auto& row : doc["payload"]["rows"]) {
      if (row[0].get<double>() == 0.0) {
        found = true;
        CHECK(row[1].get<double>() == 0.0);
      }
    }
    CHECK(found);
  }
  SUBCASE("even ground state is symmetric") {
    const json doc = invoke_json({"wavefunction", "--state", "1", "--samples", "41", "--normalize"});
    const auto& rows = doc["payload"]["rows"];
    REQUIRE(rows.size() == 41);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i][0].get<double>() == -rows[40 - i][0].get<double>());
      CHECK(rows[i][1].get<double>() == doctest::Approx(rows[40 - i][1].get<double>()));
    }
  }
  SUBCASE("closed form and ode agree") {
    const json cf = invoke_json({"wavefunction", "--state", "3", "--samples", "61"});
    const json ode = invoke_json({"wavefunction", "--state", "3", "--samples", "61", "--source", "ode"});
    CHECK(ode["provenance"] == "Oracle");
    const auto& a = cf["payload"]["rows"];
    const auto& b = ode["payload"]["rows"];
    REQUIRE(a.size() == b.size());
    // the ode table carries its own initial-value scale; fit one factor
    double ab = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ab += a[i][1].get<double>() * b[i][1].get<double>();
      bb += b[i][1].get<double>() * b[i][1].get<double>();
    }
    const double scale = ab / bb;
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      peak = std::max(peak, std::abs(a[i][1].get<double>()));
      diff = std::max(diff, std::abs(a[i][1].get<double>() - scale * b[i][1].get<double>()));
    }
    CHECK(diff < 1e-5 * peak);
  }
}

TEST_CASE("scatter tables") {
  const json doc = invoke_json({"scatter"});
  const auto& rows = doc["payload"]["rows"];
  REQUIRE(rows.size() == 200);
  double min_t = 1.0;
  for (const auto& row : rows) {
    CHECK(row[4] == "ok");
    CHECK(std::abs(row[3].get<double>() - 1.0) < 1e-8);
    min_t = std::min(min_t, row[2].get<double>());
  }
  CHECK(min_t > 0.0);

  const json sweep = invoke_json({"scatter", "--energy", "10", "--a-steps", "12"});
  const auto& srows = sweep["payload"]["rows"];
  REQUIRE(srows.size() == 12);
  for (std::size_t i = 1; i < srows.size(); ++i) {
    CHECK(srows[i][2].get<double>() < srows[i - 1][2].get<double>());
  }
}

TEST_CASE("power scan") {
  const json doc = invoke_json({"power-scan", "--nu", "4"});
  const auto& rows = doc["payload"]["rows"];
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0][1].get<double>() - 1.0) < 0.05);
  CHECK(rows[0][7] == "ok");
}

TEST_CASE("verify passes") {
  const Run r = invoke({"verify"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find(",false") == std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"spectrum", "--v0", "-1"}).code == kExitInvalidConfig);
  CHECK(invoke({"spectrum", "--a", "0"}).code == kExitInvalidConfig);
  CHECK(invoke({"spectrum", "--bogus"}).code == kExitInvalidConfig);
  CHECK(invoke({}).code == kExitInvalidConfig);
  CHECK(invoke({"spectrum", "--format", "xml"}).code == kExitInvalidConfig);
  CHECK(invoke({"scatter", "--e-min", "5", "--e-max", "1"}).code == kExitInvalidConfig);
  CHECK(invoke({"power-scan", "--nu", "9"}).code == kExitInvalidConfig);
  CHECK(invoke({"spectrum", "--config", "/nonexistent/cfg.json"}).code == kExitInvalidConfig);
  CHECK(invoke({"wavefunction", "--energy", "28"}).code == kExitInvalidConfig);
  CHECK(invoke({"wavefunction", "--energy", "28", "--parity", "even"}).code == kExitNotAnEigenvalue);
  CHECK(invoke({"wavefunction", "--energy", "28", "--parity", "even", "--source", "ode"}).code ==
        kExitOk);
  CHECK(invoke({"specfun-eval", "--function", "gamma", "--nu", "-2"}).code == kExitNumerical);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("config file precedence") {
  const auto cfg = temp_file("bic1d_test_cfg.json", R"({"v0": 4.0, "a": 1.0})");
  const auto base = lines(invoke({"spectrum", "--v0", "4"}).out);
  const auto from_cfg = lines(invoke({"spectrum", "--config", cfg.string()}).out);
  CHECK(from_cfg == base);
  // a flag wins over the file
  const auto flag = lines(invoke({"spectrum", "--config", cfg.string(), "--v0", "50"}).out);
  CHECK(flag.size() == 6);

  const json doc = invoke_json({"spectrum", "--config", cfg.string()});
  CHECK(doc["config"]["v0"] == 4.0);

  const auto bad_key = temp_file("bic1d_test_bad.json", R"({"v00": 4.0})");
  CHECK(invoke({"spectrum", "--config", bad_key.string()}).code == kExitInvalidConfig);
  const auto bad_type = temp_file("bic1d_test_type.json", R"({"v0": "fifty"})");
  CHECK(invoke({"spectrum", "--config", bad_type.string()}).code == kExitInvalidConfig);
  const auto bad_json = temp_file("bic1d_test_syntax.json", "{v0: 4");
  CHECK(invoke({"spectrum", "--config", bad_json.string()}).code == kExitInvalidConfig);
  for (const auto& p : {cfg, bad_key, bad_type, bad_json}) std::filesystem::remove(p);
}

TEST_CASE("--out writes the file") {
  const auto path = std::filesystem::temp_directory_path() / "bic1d_test_out.csv";
  const Run r = invoke({"spectrum", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == invoke({"spectrum"}).out);
  std::filesystem::remove(path);
}
