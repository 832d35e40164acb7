#pragma once

// Run configuration, report assembly and rendering for the command-line tool.
// Reports are JSON documents in SI units; text and CSV renderings may switch
// to nm / pN for display.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casimir/corrugation.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/stats.hpp"
#include "json.hpp"

namespace casimir::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_convergence = 3,
  exit_internal = 4,
};

struct Comparison {
  std::string label;
  double force = 0.0;                         ///< N
  std::optional<double> quoted_probability;  ///< externally quoted p, flagged if inconsistent
};

struct RunConfig {
  MaterialKind material = IdealMetal{};
  CorrugatedGeometry geometry;
  bool has_corrugation = false;  ///< lambda_c_m, a1_m and a2_m all given
  std::vector<double> sweep_L;
  QuadratureSettings quadrature;
  std::optional<Measurement> measurement;
  std::optional<std::filesystem::path> deviation_csv;
  std::optional<double> rho;
  std::string deviation_baseline = "linear";
  std::optional<double> calibrate_target;
  std::vector<Comparison> comparisons;
  double warn_threshold = 0.1;
  Json source;  ///< the parsed document, used for hashing and re-runs

  /// Parses and validates; ConfigError messages name the JSON pointer of the
  /// offending field.
  static RunConfig from_json(const Json& doc, const std::filesystem::path& base_dir = {});
  /// Reads a file; JSON syntax errors report line and column.
  static RunConfig load(const std::filesystem::path& path);
};

struct ReportOptions {
  bool timestamp = true;
};

enum class Format { json, csv, text };
enum class Units { si, human };

OrderedJson run_pressure(const RunConfig& config, const ReportOptions& options = {});
OrderedJson run_lateral(const RunConfig& config, const ReportOptions& options = {});
OrderedJson run_calibrate_radius(const RunConfig& config, std::optional<double> target,
                                 const ReportOptions& options = {});
OrderedJson run_collapse(const std::vector<std::filesystem::path>& csv_paths,
                         std::optional<double> rescale, const ReportOptions& options = {});

struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> mismatches;
  OrderedJson recomputed;
};

/// Re-runs the command recorded in `report` and compares every number,
/// allowing each value to move by the sum of both error estimates.
VerifyOutcome verify_report(const Json& report, const std::filesystem::path& base_dir = {});

std::string render(const OrderedJson& report, Format format, Units units);

/// FNV-1a 64-bit hash of the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const Json& doc);

}  // namespace casimir::cli
