#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "casimir/errors.hpp"
#include "casimir/report.hpp"
#include "doctest.h"

using namespace casimir;
using namespace casimir::cli;
namespace fs = std::filesystem;

namespace {

const fs::path source_dir = CASIMIR_SOURCE_DIR;

Json experiment_doc() {
  std::ifstream in(source_dir / "configs" / "experiment.json");
  return Json::parse(in);
}

std::string config_error(const Json& doc) {
  try {
    RunConfig::from_json(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("casimir_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + CASIMIR_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  Json doc = experiment_doc();
  CHECK_NOTHROW(RunConfig::from_json(doc, source_dir / "configs"));

  Json bad = doc;
  bad["geometry"]["L_m"] = "221nm";
  CHECK(config_error(bad).find("/geometry/L_m") != std::string::npos);

  bad = doc;
  bad["geometry"]["L_m"] = -1.0;
  CHECK(config_error(bad).find("/geometry/L_m") != std::string::npos);

  bad = doc;
  bad["geometry"]["colour"] = 1;
  CHECK(config_error(bad).find("/geometry/colour") != std::string::npos);

  bad = doc;
  bad["material"]["kind"] = "drude";
  CHECK(config_error(bad).find("/material/kind") != std::string::npos);

  bad = doc;
  bad["quadrature"]["rel_tolerance"] = 0.5;
  CHECK(config_error(bad).find("/quadrature/rel_tolerance") != std::string::npos);

  bad = doc;
  bad["measurement"]["confidence"] = 1.2;
  CHECK(config_error(bad).find("/measurement/confidence") != std::string::npos);

  Scratch scratch;
  const auto broken = scratch.write("broken.json", "{\n  \"material\": {\n    \"kind\": \"ideal\",\n  }\n}\n");
  try {
    RunConfig::load(broken);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(RunConfig::load(scratch.dir / "missing.json"), ConfigError);
}

TEST_CASE("lateral report") {
  const auto cfg = RunConfig::from_json(experiment_doc(), source_dir / "configs");
  const auto report = run_lateral(cfg, {false});
  CHECK(report["command"] == "lateral");
  CHECK(report["radius_m"]["source"] == "calibrated");
  const double complete = report["complete_amplitude_N"]["value"];
  CHECK(complete >= 0.32e-12);
  CHECK(complete <= 0.34e-12);
  CHECK(report["linear_amplitude_N"]["value"].get<double>() == doctest::Approx(0.28e-12).epsilon(1e-12));
  CHECK_FALSE(report["provenance"].contains("timestamp"));
  CHECK(report["provenance"]["config_hash"].get<std::string>().size() == 16);

  bool flagged = false;
  for (const auto& row : report["p_values"])
    if (row["label"] == "beyond_pfa_quoted") flagged = row["discrepancy"];
  CHECK(flagged);

  SUBCASE("deterministic without timestamp") {
    CHECK(run_lateral(cfg, {false}).dump(2) == report.dump(2));
    CHECK(run_lateral(cfg, {true})["provenance"].contains("timestamp"));
  }
  SUBCASE("verify round trip") {
    const Json plain = Json::parse(report.dump());
    CHECK(verify_report(plain, source_dir / "configs").ok);
    Json tampered = plain;
    tampered["complete_amplitude_N"]["value"] = complete * 1.01;
    const auto outcome = verify_report(tampered, source_dir / "configs");
    CHECK_FALSE(outcome.ok);
    REQUIRE_FALSE(outcome.mismatches.empty());
    CHECK(outcome.mismatches.front().find("complete_amplitude_N") != std::string::npos);
  }
  SUBCASE("renderings") {
    const auto text = render(report, Format::text, Units::human);
    CHECK(text.find("pN") != std::string::npos);
    CHECK(text.find("[WARN]") != std::string::npos);
    CHECK(text.find("[DISCREPANCY]") != std::string::npos);
    const auto csv = render(report, Format::csv, Units::si);
    CHECK(csv.find("complete_amplitude") != std::string::npos);
    CHECK(csv.front() == '#');
    CHECK(render(report, Format::json, Units::human) == report.dump(2) + "\n");
  }
}

TEST_CASE("higher-order ratio is undefined for a flat plate") {
  Json doc = experiment_doc();
  doc["geometry"]["a2_m"] = 0.0;
  doc.erase("calibrate");
  doc["geometry"]["R_m"] = 1e-4;
  const auto report = run_lateral(RunConfig::from_json(doc, source_dir / "configs"), {false});
  CHECK(report["higher_order_ratio"] == "undefined");
  CHECK(report["linear_amplitude_N"]["value"] == 0.0);
}

TEST_CASE("pressure and collapse reports") {
  std::ifstream in(source_dir / "configs" / "pressure_sweep.json");
  const auto cfg = RunConfig::from_json(Json::parse(in));
  const auto report = run_pressure(cfg, {false});
  REQUIRE(report["rows"].size() == 3);
  const double P = report["rows"][1]["pressure_Pa"]["value"];
  CHECK(P == doctest::Approx(0.812579).epsilon(1e-5));  // pi^2 hbar c / (240 (200 nm)^4)

  const auto collapse = run_collapse({source_dir / "data" / "rho_rescaled_pair.csv"}, std::nullopt, {false});
  CHECK(collapse["spread"] == 0.0);
  const auto rescaled = run_collapse({source_dir / "data" / "rho_rescaled_pair.csv"}, 10.0, {false});
  CHECK(rescaled["rescaled"].size() == 2);
}

TEST_CASE("command-line exit codes") {
  Scratch s;
  const std::string cfg = (source_dir / "configs" / "experiment.json").string();

  CHECK(run_cli("lateral --config \"" + cfg + "\" --format json --no-timestamp", s.dir / "a.json") == exit_ok);
  CHECK(run_cli("lateral --config \"" + cfg + "\" --format json --no-timestamp", s.dir / "b.json") == exit_ok);
  CHECK(s.read("a.json") == s.read("b.json"));
  CHECK(run_cli("verify \"" + (s.dir / "a.json").string() + "\"", s.dir / "v.txt") == exit_ok);
  CHECK(s.read("v.txt").find("OK") != std::string::npos);

  Json tampered = Json::parse(s.read("a.json"));
  tampered["linear_amplitude_N"]["value"] = 1e-12;
  s.write("t.json", tampered.dump(2));
  CHECK(run_cli("verify \"" + (s.dir / "t.json").string() + "\"", s.dir / "vt.txt") == exit_internal);

  CHECK(run_cli("lateral --config \"" + (s.dir / "nope.json").string() + "\"", s.dir / "e.txt") == exit_config);
  CHECK(run_cli("lateral --config \"" + cfg + "\" --format yaml", s.dir / "e.txt") == exit_config);
  CHECK(run_cli("frobnicate", s.dir / "e.txt") == exit_config);

  const auto headerless = s.write("rho.csv", "1e6,2e-7,0.9\n");
  CHECK(run_cli("collapse \"" + headerless.string() + "\"", s.dir / "e.txt") == exit_config);
  CHECK(s.read("e.txt").find("line 1") != std::string::npos);

  const auto starved = s.write("starved.json", R"({
  "material": {"kind": "plasma", "lambda_p_m": 1.0},
  "geometry": {"L_m": 1e-6},
  "quadrature": {"rel_tolerance": 1e-16, "max_subdivisions": 50}
})");
  CHECK(run_cli("pressure --config \"" + starved.string() + "\"", s.dir / "e.txt") == exit_convergence);

  CHECK(run_cli("calibrate-radius --config \"" + cfg + "\" --target 5.6e-13 --units human", s.dir / "c.txt") == exit_ok);
  CHECK(s.read("c.txt").find("205294.2") != std::string::npos);  // nm
}

TEST_CASE("documented example report reproduces") {
  std::ifstream in(source_dir / "docs" / "example_lateral_report.json");
  const Json example = Json::parse(in);
  const auto outcome = verify_report(example, source_dir / "docs");
  for (const auto& m : outcome.mismatches) MESSAGE(m);
  CHECK(outcome.ok);
}
