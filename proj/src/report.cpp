#include "casimir/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/deviation.hpp"
#include "casimir/errors.hpp"
#include "casimir/kernels.hpp"

namespace casimir::cli {

namespace {

constexpr const char* tool_version = "1.0.0";

// ---------------------------------------------------------------- parsing

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ConfigError(pointer + ": " + what);
}

void reject_unknown(const Json& obj, const std::string& pointer,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(pointer + "/" + key, "unknown field");
  }
}

const Json& object_at(const Json& parent, const std::string& pointer, const char* key) {
  const Json& v = parent.at(key);
  if (!v.is_object()) fail(pointer + "/" + key, "expected an object");
  return v;
}

double number_at(const Json& obj, const std::string& pointer, const char* key) {
  if (!obj.contains(key)) fail(pointer + "/" + key, "required field missing");
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(pointer + "/" + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(pointer + "/" + key, "must be finite");
  return d;
}

std::optional<double> optional_number(const Json& obj, const std::string& pointer,
                                      const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj, pointer, key);
}

double positive_at(const Json& obj, const std::string& pointer, const char* key) {
  const double d = number_at(obj, pointer, key);
  if (!(d > 0.0)) fail(pointer + "/" + key, "must be positive");
  return d;
}

std::string string_at(const Json& obj, const std::string& pointer, const char* key) {
  if (!obj.contains(key)) fail(pointer + "/" + key, "required field missing");
  const Json& v = obj.at(key);
  if (!v.is_string()) fail(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------- reports

OrderedJson with_error(double value, double est_error) {
  OrderedJson j;
  j["value"] = value;
  j["est_error"] = est_error;
  return j;
}

OrderedJson with_error(const PlatePairResult& r) { return with_error(r.value, r.est_error); }
OrderedJson with_error(const ForceResult& r) { return with_error(r.value, r.est_error); }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

OrderedJson provenance(const Json& config, const QuadratureSettings* quadrature,
                       const ReportOptions& options) {
  OrderedJson p;
  p["tool_version"] = tool_version;
  p["constants"] = PhysicalConstants::version;
  p["hbar_J_s"] = PhysicalConstants::hbar;
  p["c_m_s"] = PhysicalConstants::c;
  if (quadrature) {
    p["rel_tolerance"] = quadrature->rel_tolerance;
    p["abs_floor"] = quadrature->abs_floor;
    p["max_subdivisions"] = quadrature->max_subdivisions;
  }
  p["config_hash"] = config_hash(config);
  if (options.timestamp) p["timestamp"] = utc_timestamp();
  return p;
}

OrderedJson material_json(const MaterialKind& kind) {
  OrderedJson m;
  if (const auto* plasma = std::get_if<PlasmaModel>(&kind)) {
    m["kind"] = "plasma";
    m["lambda_p_m"] = plasma->lambda_p();
    m["omega_p_rad_s"] = plasma->omega_p();
  } else {
    m["kind"] = "ideal";
  }
  return m;
}

OrderedJson to_ordered(const Json& j) { return OrderedJson::parse(j.dump()); }

// Derivative of the two-sided p-value with respect to the theory value, for
// propagating the numerical error of a computed force.
double p_value_sensitivity(const Measurement& m, double theory) {
  const double sigma = sigma_from_ci(m);
  const double z = std::abs(theory - m.value) / sigma;
  return 2.0 / (sigma * std::sqrt(2.0 * pi)) * std::exp(-0.5 * z * z);
}

OrderedJson p_value_entry(const Measurement& m, const std::string& label, double force,
                          double force_error, std::optional<double> quoted) {
  OrderedJson e;
  e["label"] = label;
  e["force_N"] = with_error(force, force_error);
  const double p2 = compatibility_probability(m, force);
  e["z_score"] = std::abs(force - m.value) / sigma_from_ci(m);
  e["p_two_sided"] = with_error(p2, p_value_sensitivity(m, force) * force_error);
  e["p_one_sided"] = with_error(0.5 * p2, 0.5 * p_value_sensitivity(m, force) * force_error);
  if (quoted) {
    e["quoted_probability"] = *quoted;
    // flagged unless within a factor 1.5 of either the two- or one-sided value
    auto close = [&](double p) {
      return p > 0.0 && *quoted > 0.0 && std::abs(std::log(*quoted / p)) <= std::log(1.5);
    };
    e["discrepancy"] = !(close(p2) || close(0.5 * p2));
  }
  return e;
}

double human_length(double m) { return m * 1e9; }
double human_force(double n) { return n * 1e12; }

std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// Walks two reports in lockstep; appends mismatch descriptions.
void compare_json(const Json& a, const Json& b, const std::string& path,
                  std::vector<std::string>& out) {
  if (a.is_object() && b.is_object()) {
    if (a.contains("value") && a.contains("est_error") && b.contains("value") &&
        b.contains("est_error") && a["value"].is_number() && b["value"].is_number()) {
      const double va = a["value"].get<double>(), vb = b["value"].get<double>();
      const double tol = a["est_error"].get<double>() + b["est_error"].get<double>() +
                         1e-14 * std::max(std::abs(va), std::abs(vb));
      if (std::abs(va - vb) > tol)
        out.push_back(path + ": " + fmt(va, 17) + " vs " + fmt(vb, 17) + " (allowed " +
                      fmt(tol, 3) + ")");
      return;
    }
    std::set<std::string> keys;
    for (const auto& [k, _] : a.items()) keys.insert(k);
    for (const auto& [k, _] : b.items()) keys.insert(k);
    for (const auto& k : keys) {
      if (path == "/provenance" && k == "timestamp") continue;
      if (!a.contains(k) || !b.contains(k)) {
        out.push_back(path + "/" + k + ": present in only one report");
        continue;
      }
      compare_json(a[k], b[k], path + "/" + k, out);
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(path + ": array sizes differ");
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      compare_json(a[i], b[i], path + "/" + std::to_string(i), out);
    return;
  }
  if (a.is_number() && b.is_number()) {
    const double va = a.get<double>(), vb = b.get<double>();
    if (std::abs(va - vb) > 1e-12 * std::max(std::abs(va), std::abs(vb)))
      out.push_back(path + ": " + fmt(va, 17) + " vs " + fmt(vb, 17));
    return;
  }
  if (a != b) out.push_back(path + ": " + a.dump() + " vs " + b.dump());
}

}  // namespace

// ---------------------------------------------------------------- config

RunConfig RunConfig::from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("/: configuration must be a JSON object");
  reject_unknown(doc, "",
                 {"material", "geometry", "sweep", "quadrature", "measurement", "deviation_csv",
                  "rho", "deviation_baseline", "calibrate", "comparisons", "warn_threshold"});
  RunConfig cfg;
  cfg.source = doc;

  if (!doc.contains("material")) fail("/material", "required field missing");
  {
    const Json& m = object_at(doc, "", "material");
    const std::string kind = string_at(m, "/material", "kind");
    if (kind == "ideal") {
      reject_unknown(m, "/material", {"kind"});
      cfg.material = IdealMetal{};
    } else if (kind == "plasma") {
      reject_unknown(m, "/material", {"kind", "lambda_p_m"});
      cfg.material = PlasmaModel(positive_at(m, "/material", "lambda_p_m"));
    } else {
      fail("/material/kind", "expected \"ideal\" or \"plasma\", got \"" + kind + "\"");
    }
  }

  if (doc.contains("sweep")) {
    const Json& s = object_at(doc, "", "sweep");
    reject_unknown(s, "/sweep", {"L_m"});
    if (!s.contains("L_m") || !s["L_m"].is_array() || s["L_m"].empty())
      fail("/sweep/L_m", "expected a non-empty array of separations");
    for (std::size_t i = 0; i < s["L_m"].size(); ++i) {
      const Json& v = s["L_m"][i];
      const std::string ptr = "/sweep/L_m/" + std::to_string(i);
      if (!v.is_number() || !(v.get<double>() > 0.0)) fail(ptr, "expected a positive number");
      cfg.sweep_L.push_back(v.get<double>());
    }
  }

  if (doc.contains("geometry")) {
    const Json& g = object_at(doc, "", "geometry");
    reject_unknown(g, "/geometry", {"L_m", "lambda_c_m", "a1_m", "a2_m", "R_m"});
    cfg.geometry.L = positive_at(g, "/geometry", "L_m");
    const int present = int(g.contains("lambda_c_m")) + int(g.contains("a1_m")) +
                        int(g.contains("a2_m"));
    if (present != 0 && present != 3)
      fail("/geometry", "lambda_c_m, a1_m and a2_m must be given together");
    if (present == 3) {
      cfg.has_corrugation = true;
      cfg.geometry.lambda_c = positive_at(g, "/geometry", "lambda_c_m");
      cfg.geometry.a1 = number_at(g, "/geometry", "a1_m");
      cfg.geometry.a2 = number_at(g, "/geometry", "a2_m");
      if (cfg.geometry.a1 < 0.0) fail("/geometry/a1_m", "must be non-negative");
      if (cfg.geometry.a2 < 0.0) fail("/geometry/a2_m", "must be non-negative");
    }
    if (g.contains("R_m")) cfg.geometry.R = positive_at(g, "/geometry", "R_m");
    if (cfg.has_corrugation) {
      try {
        cfg.geometry.validate();
      } catch (const DomainError& e) {
        fail("/geometry", e.what());
      }
    }
  } else if (cfg.sweep_L.empty()) {
    fail("/geometry", "required field missing (or give /sweep/L_m)");
  }

  if (doc.contains("quadrature")) {
    const Json& q = object_at(doc, "", "quadrature");
    reject_unknown(q, "/quadrature", {"rel_tolerance", "abs_floor", "max_subdivisions", "execution"});
    if (auto v = optional_number(q, "/quadrature", "rel_tolerance")) {
      if (!(*v > 0.0 && *v <= 1e-3)) fail("/quadrature/rel_tolerance", "must lie in (0, 1e-3]");
      cfg.quadrature.rel_tolerance = *v;
    }
    if (auto v = optional_number(q, "/quadrature", "abs_floor")) {
      if (*v < 0.0) fail("/quadrature/abs_floor", "must be non-negative");
      cfg.quadrature.abs_floor = *v;
    }
    if (q.contains("max_subdivisions")) {
      const Json& v = q["max_subdivisions"];
      if (!v.is_number_integer() || v.get<long long>() < 50)
        fail("/quadrature/max_subdivisions", "expected an integer >= 50");
      cfg.quadrature.max_subdivisions = v.get<std::size_t>();
    }
    if (q.contains("execution")) {
      const std::string e = string_at(q, "/quadrature", "execution");
      if (e == "serial")
        cfg.quadrature.execution = Execution::serial;
      else if (e == "parallel")
        cfg.quadrature.execution = Execution::parallel;
      else
        fail("/quadrature/execution", "expected \"serial\" or \"parallel\"");
    }
  }

  if (doc.contains("measurement")) {
    const Json& m = object_at(doc, "", "measurement");
    reject_unknown(m, "/measurement", {"value_N", "ci_halfwidth_N", "confidence"});
    Measurement meas;
    meas.value = number_at(m, "/measurement", "value_N");
    meas.ci_halfwidth = positive_at(m, "/measurement", "ci_halfwidth_N");
    meas.confidence = number_at(m, "/measurement", "confidence");
    if (!(meas.confidence > 0.0 && meas.confidence < 1.0))
      fail("/measurement/confidence", "must lie in (0, 1)");
    cfg.measurement = meas;
  }

  if (doc.contains("deviation_csv")) {
    std::filesystem::path p = string_at(doc, "", "deviation_csv");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.deviation_csv = p;
  }
  if (doc.contains("rho")) cfg.rho = positive_at(doc, "", "rho");
  if (cfg.rho && cfg.deviation_csv) fail("/rho", "give either rho or deviation_csv, not both");
  if (doc.contains("deviation_baseline")) {
    cfg.deviation_baseline = string_at(doc, "", "deviation_baseline");
    if (cfg.deviation_baseline != "linear" && cfg.deviation_baseline != "complete")
      fail("/deviation_baseline", "expected \"linear\" or \"complete\"");
  }

  if (doc.contains("calibrate")) {
    const Json& c = object_at(doc, "", "calibrate");
    reject_unknown(c, "/calibrate", {"target_linear_amplitude_N"});
    cfg.calibrate_target = positive_at(c, "/calibrate", "target_linear_amplitude_N");
  }

  if (doc.contains("comparisons")) {
    const Json& arr = doc["comparisons"];
    if (!arr.is_array()) fail("/comparisons", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ptr = "/comparisons/" + std::to_string(i);
      if (!arr[i].is_object()) fail(ptr, "expected an object");
      reject_unknown(arr[i], ptr, {"label", "force_N", "quoted_probability"});
      Comparison c;
      c.label = string_at(arr[i], ptr, "label");
      c.force = number_at(arr[i], ptr, "force_N");
      c.quoted_probability = optional_number(arr[i], ptr, "quoted_probability");
      if (c.quoted_probability && !(*c.quoted_probability >= 0.0 && *c.quoted_probability <= 1.0))
        fail(ptr + "/quoted_probability", "must lie in [0, 1]");
      cfg.comparisons.push_back(std::move(c));
    }
  }

  if (doc.contains("warn_threshold")) cfg.warn_threshold = positive_at(doc, "", "warn_threshold");
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return from_json(doc, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_hash(const Json& doc) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------- commands

OrderedJson run_pressure(const RunConfig& config, const ReportOptions& options) {
  std::vector<double> Ls = config.sweep_L;
  if (Ls.empty()) Ls.push_back(config.geometry.L);

  struct Row {
    PlatePairResult energy, pressure, curvature;
  };
  std::vector<Row> rows;
  // one separation per task; each evaluation runs its own quadrature serially
  QuadratureSettings inner = config.quadrature;
  if (Ls.size() > 1) inner.execution = Execution::serial;
  kernels::generate(config.quadrature.execution, Ls.size(), rows, [&](std::size_t i) {
    return Row{energy_per_area(config.material, Ls[i], inner),
               pressure(config.material, Ls[i], inner),
               energy_derivative(config.material, Ls[i], 2, inner)};
  });

  OrderedJson report;
  report["command"] = "pressure";
  report["material"] = material_json(config.material);
  report["rows"] = OrderedJson::array();
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    OrderedJson r;
    r["L_m"] = Ls[i];
    r["energy_J_m2"] = with_error(rows[i].energy);
    r["pressure_Pa"] = with_error(rows[i].pressure);
    r["dE_dL_Pa"] = with_error(rows[i].pressure);
    r["d2E_dL2_Pa_m"] = with_error(rows[i].curvature);
    if (std::holds_alternative<PlasmaModel>(config.material)) {
      const double ideal_e = ideal::energy_per_area(Ls[i]);
      r["reduction_factor"] = with_error(rows[i].energy.value / ideal_e,
                                         rows[i].energy.est_error / std::abs(ideal_e));
    }
    report["rows"].push_back(r);
  }
  report["provenance"] = provenance(config.source, &config.quadrature, options);
  report["config"] = to_ordered(config.source);
  return report;
}

OrderedJson run_calibrate_radius(const RunConfig& config, std::optional<double> target,
                                 const ReportOptions& options) {
  if (!config.has_corrugation) throw ConfigError("/geometry: corrugation parameters required");
  const std::optional<double> t = target ? target : config.calibrate_target;
  if (!t) throw ConfigError("/calibrate/target_linear_amplitude_N: required field missing");
  if (config.geometry.a1 * config.geometry.a2 == 0.0)
    throw ConfigError("/geometry: cannot calibrate a radius when a1 * a2 = 0");
  const auto p = pressure(config.material, config.geometry.L, config.quadrature);
  const double R = calibrate_radius(config.geometry, config.material, *t, config.quadrature);

  OrderedJson report;
  report["command"] = "calibrate-radius";
  report["material"] = material_json(config.material);
  report["target_linear_amplitude_N"] = *t;
  report["pressure_Pa"] = with_error(p);
  report["radius_m"] = with_error(R, R * p.est_error / p.value);
  report["provenance"] = provenance(config.source, &config.quadrature, options);
  report["config"] = to_ordered(config.source);
  return report;
}

OrderedJson run_lateral(const RunConfig& config, const ReportOptions& options) {
  if (!config.has_corrugation)
    throw ConfigError("/geometry: lambda_c_m, a1_m and a2_m are required for 'lateral'");
  CorrugatedGeometry geom = config.geometry;
  const bool degenerate = geom.a1 * geom.a2 == 0.0;

  OrderedJson report;
  report["command"] = "lateral";
  report["material"] = material_json(config.material);

  OrderedJson radius;
  if (config.calibrate_target) {
    if (degenerate) throw ConfigError("/calibrate: cannot calibrate a radius when a1 * a2 = 0");
    const auto p = pressure(config.material, geom.L, config.quadrature);
    const double R = calibrate_radius(geom, config.material, *config.calibrate_target,
                                      config.quadrature);
    geom.R = R;
    radius["value"] = R;
    radius["est_error"] = R * p.est_error / p.value;
    radius["source"] = "calibrated";
    radius["target_linear_amplitude_N"] = *config.calibrate_target;
  } else if (geom.R) {
    radius["value"] = *geom.R;
    radius["est_error"] = 0.0;
    radius["source"] = "config";
  } else {
    throw ConfigError("/geometry/R_m: required unless /calibrate is given");
  }
  report["radius_m"] = radius;

  OrderedJson g;
  g["L_m"] = geom.L;
  g["lambda_c_m"] = geom.lambda_c;
  g["k_rad_per_m"] = geom.k();
  g["a1_m"] = geom.a1;
  g["a2_m"] = geom.a2;
  g["min_gap_m"] = geom.L - geom.a1 - geom.a2;
  report["geometry"] = g;

  const CorrugationModel model(geom, config.material, config.quadrature);
  const ForceResult linear = model.linear_amplitude_sphere();
  const AmplitudeResult complete = model.complete_amplitude_sphere();
  report["linear_amplitude_N"] = with_error(linear);
  OrderedJson comp = with_error(complete.amplitude, complete.est_error);
  comp["b_max_m"] = complete.b_max;
  comp["first_harmonic_N"] = complete.first_harmonic;
  report["complete_amplitude_N"] = comp;
  if (degenerate) {
    report["higher_order_ratio"] = "undefined";
    report["higher_order_ratio_note"] = "a1 * a2 = 0: both amplitudes vanish";
  } else {
    const double ratio = complete.amplitude / linear.value;
    const double rel = complete.est_error / complete.amplitude + linear.est_error / linear.value;
    report["higher_order_ratio"] = with_error(ratio, ratio * rel);
  }
  report["energy_table_rel_error"] = model.table_rel_error();

  std::optional<ForceResult> external;
  if (config.rho || config.deviation_csv) {
    OrderedJson ext;
    double rho = 0.0;
    if (config.rho) {
      rho = *config.rho;
      ext["source"] = "config";
    } else {
      const auto curve = read_deviation_csv(*config.deviation_csv);
      try {
        rho = deviation_at(curve, geom.k() * geom.L);
      } catch (const DomainError& e) {
        throw ConfigError(config.deviation_csv->string() + ": " + e.what());
      }
      ext["source"] = config.deviation_csv->string();
    }
    const bool on_linear = config.deviation_baseline == "linear";
    const ForceResult base = on_linear ? linear : ForceResult{complete.amplitude, complete.est_error};
    external = ForceResult{apply_deviation(rho, base.value), rho * base.est_error};
    ext["rho"] = rho;
    ext["kL"] = geom.k() * geom.L;
    ext["baseline"] = config.deviation_baseline;
    ext["amplitude_N"] = with_error(*external);
    report["external"] = ext;
  }

  if (const auto* plasma = std::get_if<PlasmaModel>(&config.material)) {
    const auto v = validity_diagnostics(geom, *plasma, config.warn_threshold);
    OrderedJson val;
    val["warn_threshold"] = v.warn_threshold;
    val["separation_threshold"] = v.separation_threshold;
    val["ratios"] = OrderedJson::array();
    for (const auto& f : v.flags())
      val["ratios"].push_back({{"name", f.name}, {"value", f.value}, {"warn", f.warn}});
    report["validity"] = val;
  } else {
    // an ideal metal has lambda_p -> 0, so only the geometric ratios apply
    OrderedJson val;
    val["warn_threshold"] = config.warn_threshold;
    val["ratios"] = OrderedJson::array();
    auto add = [&](const char* name, double value, double threshold) {
      val["ratios"].push_back({{"name", name}, {"value", value}, {"warn", value > threshold}});
    };
    add("a1/L", geom.a1 / geom.L, config.warn_threshold);
    add("a2/L", geom.a2 / geom.L, config.warn_threshold);
    add("a1/lambda_c", geom.a1 / geom.lambda_c, config.warn_threshold);
    add("a2/lambda_c", geom.a2 / geom.lambda_c, config.warn_threshold);
    add("L/lambda_c", geom.L / geom.lambda_c, 1.0 / 3.0);
    report["validity"] = val;
  }

  if (config.measurement) {
    const Measurement& m = *config.measurement;
    OrderedJson meas;
    meas["value_N"] = m.value;
    meas["ci_halfwidth_N"] = m.ci_halfwidth;
    meas["confidence"] = m.confidence;
    meas["z_quantile"] = two_sided_quantile(m.confidence);
    meas["sigma_N"] = sigma_from_ci(m);
    report["measurement"] = meas;
    OrderedJson ps = OrderedJson::array();
    ps.push_back(p_value_entry(m, "linear_pfa", linear.value, linear.est_error, std::nullopt));
    ps.push_back(
        p_value_entry(m, "complete_pfa", complete.amplitude, complete.est_error, std::nullopt));
    if (external)
      ps.push_back(p_value_entry(m, "external", external->value, external->est_error, std::nullopt));
    for (const auto& c : config.comparisons)
      ps.push_back(p_value_entry(m, c.label, c.force, 0.0, c.quoted_probability));
    report["p_values"] = ps;
  }

  report["provenance"] = provenance(config.source, &config.quadrature, options);
  report["config"] = to_ordered(config.source);
  return report;
}

OrderedJson run_collapse(const std::vector<std::filesystem::path>& csv_paths,
                         std::optional<double> rescale, const ReportOptions& options) {
  if (csv_paths.empty()) throw ConfigError("collapse: at least one CSV file is required");
  std::vector<DeviationCurve> curves;
  OrderedJson inputs;
  inputs["csv"] = OrderedJson::array();
  for (const auto& p : csv_paths) {
    inputs["csv"].push_back(p.string());
    for (auto& c : split_by_separation(read_deviation_csv(p))) curves.push_back(std::move(c));
  }
  if (rescale) inputs["rescale"] = *rescale;

  OrderedJson report;
  report["command"] = "collapse";
  report["inputs"] = inputs;
  report["curves"] = OrderedJson::array();
  for (const auto& c : curves) {
    double umin = INFINITY, umax = -INFINITY;
    for (const auto& p : c.points) {
      umin = std::min(umin, p.kL());
      umax = std::max(umax, p.kL());
    }
    report["curves"].push_back({{"label", c.label},
                                {"L_m", c.points.front().L},
                                {"points", c.points.size()},
                                {"kL_min", umin},
                                {"kL_max", umax}});
  }
  if (curves.size() >= 2) {
    report["spread"] = collapse_check(curves);
  } else if (!rescale) {
    throw ConfigError("collapse: need curves at two or more separations (or --rescale)");
  } else {
    report["spread"] = nullptr;
  }
  if (rescale) {
    if (!(*rescale > 0.0)) throw ConfigError("--rescale: factor must be positive");
    OrderedJson pts = OrderedJson::array();
    for (const auto& c : curves)
      for (const auto& p : c.points) {
        const auto r = rescale_point(p, *rescale);
        pts.push_back({{"k_rad_per_m", r.k}, {"L_m", r.L}, {"rho", r.rho}, {"kL", r.kL()}});
      }
    report["rescaled"] = pts;
  }
  Json hashed;
  hashed["inputs"] = Json::parse(inputs.dump());
  report["provenance"] = provenance(hashed, nullptr, options);
  return report;
}

VerifyOutcome verify_report(const Json& report, const std::filesystem::path& base_dir) {
  if (!report.is_object() || !report.contains("command") || !report["command"].is_string())
    throw ConfigError("verify: report has no 'command' field");
  const std::string command = report["command"];
  const ReportOptions no_time{false};
  VerifyOutcome out;
  if (command == "collapse") {
    std::vector<std::filesystem::path> paths;
    for (const auto& p : report.at("inputs").at("csv")) paths.emplace_back(p.get<std::string>());
    std::optional<double> rescale;
    if (report["inputs"].contains("rescale")) rescale = report["inputs"]["rescale"].get<double>();
    out.recomputed = run_collapse(paths, rescale, no_time);
  } else {
    if (!report.contains("config")) throw ConfigError("verify: report has no embedded config");
    const RunConfig cfg = RunConfig::from_json(report["config"], base_dir);
    if (command == "pressure")
      out.recomputed = run_pressure(cfg, no_time);
    else if (command == "lateral")
      out.recomputed = run_lateral(cfg, no_time);
    else if (command == "calibrate-radius")
      out.recomputed = run_calibrate_radius(
          cfg, report.at("target_linear_amplitude_N").get<double>(), no_time);
    else
      throw ConfigError("verify: unknown command '" + command + "'");
  }
  compare_json(report, Json::parse(out.recomputed.dump()), "", out.mismatches);
  out.ok = out.mismatches.empty();
  return out;
}

// ---------------------------------------------------------------- render

namespace {

struct Columns {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rows;
};

std::string table_text(const Columns& c) {
  std::vector<std::size_t> width(c.names.size());
  for (std::size_t i = 0; i < c.names.size(); ++i) width[i] = c.names[i].size();
  for (const auto& r : c.rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os << std::left << std::setw(int(width[i]) + 2) << cells[i];
    os << '\n';
  };
  line(c.names);
  for (const auto& r : c.rows) line(r);
  return os.str();
}

std::string table_csv(const Columns& c) {
  std::ostringstream os;
  os << '#';
  for (std::size_t i = 0; i < c.names.size(); ++i) os << (i ? "," : " ") << c.names[i];
  os << '\n';
  for (const auto& r : c.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

Columns pressure_columns(const OrderedJson& report, Units units) {
  Columns c;
  const bool human = units == Units::human;
  c.names = {human ? "L_nm" : "L_m", "E_J_m2", "E_err", "P_Pa", "P_err", "dE_dL_Pa",
             "d2E_dL2_Pa_m", "d2E_err"};
  for (const auto& r : report["rows"]) {
    const double L = r["L_m"].get<double>();
    c.rows.push_back({fmt(human ? human_length(L) : L), fmt(r["energy_J_m2"]["value"].get<double>()),
                      fmt(r["energy_J_m2"]["est_error"].get<double>(), 3),
                      fmt(r["pressure_Pa"]["value"].get<double>()),
                      fmt(r["pressure_Pa"]["est_error"].get<double>(), 3),
                      fmt(r["dE_dL_Pa"]["value"].get<double>()),
                      fmt(r["d2E_dL2_Pa_m"]["value"].get<double>()),
                      fmt(r["d2E_dL2_Pa_m"]["est_error"].get<double>(), 3)});
  }
  return c;
}

Columns lateral_columns(const OrderedJson& report, Units units) {
  const bool human = units == Units::human;
  const std::string fu = human ? "pN" : "N";
  const std::string lu = human ? "nm" : "m";
  auto force = [&](double v) { return fmt(human ? human_force(v) : v); };
  auto length = [&](double v) { return fmt(human ? human_length(v) : v); };
  Columns c;
  c.names = {"quantity", "value", "est_error", "unit"};
  c.rows.push_back({"radius", length(report["radius_m"]["value"].get<double>()),
                    length(report["radius_m"]["est_error"].get<double>()), lu});
  c.rows.push_back({"linear_amplitude", force(report["linear_amplitude_N"]["value"].get<double>()),
                    force(report["linear_amplitude_N"]["est_error"].get<double>()), fu});
  c.rows.push_back({"complete_amplitude",
                    force(report["complete_amplitude_N"]["value"].get<double>()),
                    force(report["complete_amplitude_N"]["est_error"].get<double>()), fu});
  c.rows.push_back({"b_max", length(report["complete_amplitude_N"]["b_max_m"].get<double>()), "0", lu});
  if (report["higher_order_ratio"].is_object())
    c.rows.push_back({"higher_order_ratio", fmt(report["higher_order_ratio"]["value"].get<double>()),
                      fmt(report["higher_order_ratio"]["est_error"].get<double>(), 3), "1"});
  else
    c.rows.push_back({"higher_order_ratio", "undefined", "", "1"});
  if (report.contains("external"))
    c.rows.push_back({"external_amplitude",
                      force(report["external"]["amplitude_N"]["value"].get<double>()),
                      force(report["external"]["amplitude_N"]["est_error"].get<double>()), fu});
  for (const auto& r : report["validity"]["ratios"])
    c.rows.push_back({"ratio " + r["name"].get<std::string>() + (r["warn"].get<bool>() ? " [WARN]" : ""),
                      fmt(r["value"].get<double>(), 6), "0", "1"});
  if (report.contains("p_values")) {
    c.rows.push_back({"sigma", force(report["measurement"]["sigma_N"].get<double>()), "0", fu});
    for (const auto& p : report["p_values"]) {
      const std::string label = p["label"].get<std::string>();
      c.rows.push_back({"p_two_sided " + label, fmt(p["p_two_sided"]["value"].get<double>(), 6),
                        fmt(p["p_two_sided"]["est_error"].get<double>(), 3), "1"});
      c.rows.push_back({"p_one_sided " + label, fmt(p["p_one_sided"]["value"].get<double>(), 6),
                        fmt(p["p_one_sided"]["est_error"].get<double>(), 3), "1"});
      if (p.contains("quoted_probability"))
        c.rows.push_back({"quoted_p " + label + (p["discrepancy"].get<bool>() ? " [DISCREPANCY]" : ""),
                          fmt(p["quoted_probability"].get<double>(), 6), "", "1"});
    }
  }
  return c;
}

Columns calibrate_columns(const OrderedJson& report, Units units) {
  const bool human = units == Units::human;
  Columns c;
  c.names = {"quantity", "value", "est_error", "unit"};
  const double R = report["radius_m"]["value"].get<double>();
  const double Re = report["radius_m"]["est_error"].get<double>();
  const double t = report["target_linear_amplitude_N"].get<double>();
  c.rows.push_back({"target_linear_amplitude", fmt(human ? human_force(t) : t), "0", human ? "pN" : "N"});
  c.rows.push_back({"pressure", fmt(report["pressure_Pa"]["value"].get<double>()),
                    fmt(report["pressure_Pa"]["est_error"].get<double>(), 3), "Pa"});
  c.rows.push_back({"radius", fmt(human ? human_length(R) : R), fmt(human ? human_length(Re) : Re, 3),
                    human ? "nm" : "m"});
  return c;
}

Columns collapse_columns(const OrderedJson& report, Units units) {
  const bool human = units == Units::human;
  Columns c;
  if (report.contains("rescaled")) {
    c.names = {human ? "k_rad_per_um" : "k_rad_per_m", human ? "L_nm" : "L_m", "rho", "kL"};
    for (const auto& p : report["rescaled"]) {
      const double k = p["k_rad_per_m"].get<double>(), L = p["L_m"].get<double>();
      c.rows.push_back({fmt(human ? k * 1e-6 : k, 17), fmt(human ? human_length(L) : L, 17),
                        fmt(p["rho"].get<double>(), 17), fmt(p["kL"].get<double>(), 17)});
    }
  } else {
    c.names = {"curve", human ? "L_nm" : "L_m", "points", "kL_min", "kL_max"};
    for (const auto& cv : report["curves"]) {
      const double L = cv["L_m"].get<double>();
      c.rows.push_back({cv["label"].get<std::string>(), fmt(human ? human_length(L) : L),
                        std::to_string(cv["points"].get<std::size_t>()),
                        fmt(cv["kL_min"].get<double>()), fmt(cv["kL_max"].get<double>())});
    }
  }
  return c;
}

}  // namespace

std::string render(const OrderedJson& report, Format format, Units units) {
  if (format == Format::json) return report.dump(2) + "\n";
  const std::string command = report["command"];
  Columns columns;
  std::string preamble;
  if (command == "pressure") {
    columns = pressure_columns(report, units);
    preamble = "material: " + report["material"]["kind"].get<std::string>();
  } else if (command == "lateral") {
    columns = lateral_columns(report, units);
    preamble = "material: " + report["material"]["kind"].get<std::string>();
  } else if (command == "calibrate-radius") {
    columns = calibrate_columns(report, units);
  } else if (command == "collapse") {
    columns = collapse_columns(report, units);
    preamble = "spread: " + (report["spread"].is_null() ? std::string("n/a")
                                                        : fmt(report["spread"].get<double>(), 6));
  }
  if (format == Format::csv) {
    std::string out = preamble.empty() ? "" : "# " + preamble + "\n";
    return out + table_csv(columns);
  }
  std::string out = "casimir " + command + "\n";
  if (!preamble.empty()) out += preamble + "\n";
  return out + table_text(columns);
}

}  // namespace casimir::cli
