// casimir: lateral Casimir force between corrugated surfaces in the
// proximity-force approximation.
//
//   casimir pressure         --config run.json
//   casimir lateral          --config run.json [--format json|csv|text] [--units si|human]
//   casimir calibrate-radius --config run.json [--target 2.8e-13]
//   casimir collapse         curves.csv [more.csv ...] [--rescale 10]
//   casimir verify           report.json
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// convergence failure, 4 internal invariant violation (including a report
// that no longer verifies).

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "casimir/errors.hpp"
#include "casimir/report.hpp"

using namespace casimir;
using namespace casimir::cli;

int main(int argc, char** argv) {
  CLI::App app{"Lateral Casimir force between corrugated surfaces (PFA, plasma model)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format_name = "text";
  std::string units_name = "si";
  bool no_timestamp = false;
  std::optional<double> rescale;
  std::optional<double> target;
  std::vector<std::string> csv_paths;
  std::string report_path;

  const std::map<std::string, Format> formats{
      {"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};
  const std::map<std::string, Units> units{{"si", Units::si}, {"human", Units::human}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--units", units_name, "Display units for text/csv (JSON stays SI)")
        ->check(CLI::IsMember({"si", "human"}));
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from reports");
  };

  auto* pressure_cmd = app.add_subcommand("pressure", "Plate-plate energy, pressure and derivatives");
  pressure_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  add_common(pressure_cmd);

  auto* lateral_cmd = app.add_subcommand("lateral", "Linear and complete PFA lateral-force amplitudes");
  lateral_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  add_common(lateral_cmd);

  auto* calibrate_cmd =
      app.add_subcommand("calibrate-radius", "Sphere radius reproducing a linear amplitude");
  calibrate_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  calibrate_cmd->add_option("--target", target, "Target linear amplitude in N");
  add_common(calibrate_cmd);

  auto* collapse_cmd = app.add_subcommand("collapse", "kL-collapse test of deviation curves");
  collapse_cmd->add_option("csv", csv_paths, "Deviation CSV files (k_rad_per_m,L_m,rho)")
      ->required();
  collapse_cmd->add_option("--rescale", rescale, "Rescale every point by this factor");
  add_common(collapse_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Recompute a JSON report and compare");
  verify_cmd->add_option("report", report_path, "JSON report produced by this tool")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const ReportOptions options{!no_timestamp};
  const Format format = formats.at(format_name);
  const Units unit = units.at(units_name);

  try {
    OrderedJson report;
    if (*pressure_cmd) {
      report = run_pressure(RunConfig::load(config_path), options);
    } else if (*lateral_cmd) {
      report = run_lateral(RunConfig::load(config_path), options);
    } else if (*calibrate_cmd) {
      report = run_calibrate_radius(RunConfig::load(config_path), target, options);
    } else if (*collapse_cmd) {
      std::vector<std::filesystem::path> paths(csv_paths.begin(), csv_paths.end());
      report = run_collapse(paths, rescale, options);
    } else if (*verify_cmd) {
      std::ifstream in(report_path);
      if (!in) throw ConfigError("cannot open report '" + report_path + "'");
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw ConfigError(report_path + ": " + e.what());
      }
      const auto outcome = verify_report(doc, std::filesystem::path(report_path).parent_path());
      if (!outcome.ok) {
        std::cerr << "verify: report does not reproduce\n";
        for (const auto& m : outcome.mismatches) std::cerr << "  " << m << '\n';
        return exit_internal;
      }
      std::cout << "verify: OK\n";
      return exit_ok;
    }
    std::cout << render(report, format, unit);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (best estimate " << e.estimate() << " +/- "
              << e.est_error() << ")\n";
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
  return exit_ok;
}
