#include "casimir/deviation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& field, std::size_t line, const char* column) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("line " + std::to_string(line) + ": column '" + column +
                      "' is not a number: '" + field + "'");
  }
  return value;
}

bool same_u(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

struct CurveOnLog {
  double lo, hi;  // log(kL) range
  MonotoneCubic interp;
};

}  // namespace

void DeviationCurve::validate() const {
  std::set<std::pair<double, double>> seen;
  for (const auto& p : points) {
    if (!(p.rho > 0.0)) throw DomainError("curve '" + label + "': rho must be positive");
    if (!(p.k > 0.0) || !(p.L > 0.0))
      throw DomainError("curve '" + label + "': k and L must be positive");
    if (!seen.insert({p.k, p.L}).second)
      throw DomainError("curve '" + label + "': duplicate (k, L) pair");
  }
}

DeviationCurve read_deviation_csv(std::istream& in, const std::string& label) {
  DeviationCurve curve;
  curve.label = label;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(trim(f));
    if (!header_seen) {
      if (fields != std::vector<std::string>{"k_rad_per_m", "L_m", "rho"}) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": expected header 'k_rad_per_m,L_m,rho', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                        std::to_string(fields.size()));
    }
    DeviationPoint p{parse_number(fields[0], line_no, "k_rad_per_m"),
                     parse_number(fields[1], line_no, "L_m"),
                     parse_number(fields[2], line_no, "rho")};
    if (!(p.rho > 0.0) || !(p.k > 0.0) || !(p.L > 0.0))
      throw ConfigError("line " + std::to_string(line_no) + ": k, L and rho must be positive");
    curve.points.push_back(p);
  }
  if (!header_seen) throw ConfigError("missing header 'k_rad_per_m,L_m,rho'");
  if (curve.points.empty()) throw ConfigError("no data rows after the header");
  try {
    curve.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return curve;
}

DeviationCurve read_deviation_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open deviation CSV '" + path.string() + "'");
  try {
    return read_deviation_csv(in, path.filename().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<DeviationCurve> split_by_separation(const DeviationCurve& curve) {
  std::map<double, DeviationCurve> by_L;
  for (const auto& p : curve.points) {
    auto& c = by_L[p.L];
    if (c.label.empty()) {
      std::ostringstream os;
      os.precision(6);
      os << curve.label << "@L=" << p.L;
      c.label = os.str();
    }
    c.points.push_back(p);
  }
  std::vector<DeviationCurve> out;
  for (auto& [L, c] : by_L) out.push_back(std::move(c));
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n == 0 || n != y_.size()) throw DomainError("interpolation needs matching non-empty data");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw DomainError("interpolation nodes must be strictly increasing");
  slope_.assign(n, 0.0);
  if (n == 1) return;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(d) != std::signbit(d0) || d0 == 0.0) return 0.0;
    if (std::signbit(d0) != std::signbit(d1) && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  };
  slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
  if (x_.size() == 1 || x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double collapse_check(const std::vector<DeviationCurve>& curves) {
  if (curves.size() < 2) throw DomainError("collapse check needs at least two curves");
  std::vector<CurveOnLog> logs;
  std::vector<double> grid;
  for (const auto& c : curves) {
    c.validate();
    if (c.points.empty()) throw DomainError("curve '" + c.label + "' is empty");
    const double L = c.points.front().L;
    for (const auto& p : c.points)
      if (p.L != L) throw DomainError("curve '" + c.label + "' mixes several separations");
    std::vector<DeviationPoint> pts = c.points;
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.kL() < b.kL(); });
    std::vector<double> x, y;
    for (const auto& p : pts) {
      x.push_back(std::log(p.kL()));
      y.push_back(p.rho);
      grid.push_back(x.back());
    }
    logs.push_back({x.front(), x.back(), MonotoneCubic(x, y)});
  }

  double lo = logs.front().lo, hi = logs.front().hi;
  for (const auto& c : logs) {
    lo = std::max(lo, c.lo);
    hi = std::min(hi, c.hi);
  }
  // log(kL) agreeing to a few ulps counts as the same kL
  constexpr double slack = 1e-12;
  if (lo > hi + slack * std::max(1.0, std::abs(hi)))
    throw DomainError("deviation curves have no overlapping kL range");
  if (lo > hi) lo = hi = 0.5 * (lo + hi);

  std::sort(grid.begin(), grid.end());
  std::vector<double> nodes;
  for (double g : grid) {
    if (g < lo - slack || g > hi + slack) continue;
    const double clamped = std::clamp(g, lo, hi);
    if (nodes.empty() || !same_u(nodes.back(), clamped) ) nodes.push_back(clamped);
  }
  if (nodes.empty()) nodes.push_back(lo);
  std::vector<double> eval = nodes;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) eval.push_back(0.5 * (nodes[i] + nodes[i + 1]));

  double spread = 0.0;
  for (double u : eval) {
    double mn = INFINITY, mx = -INFINITY, sum = 0.0;
    for (const auto& c : logs) {
      const double v = c.interp(std::clamp(u, c.lo, c.hi));
      mn = std::min(mn, v);
      mx = std::max(mx, v);
      sum += v;
    }
    spread = std::max(spread, (mx - mn) / (sum / double(logs.size())));
  }
  return spread;
}

DeviationPoint rescale_point(const DeviationPoint& point, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw DomainError("rescale factor must be positive");
  return {point.k / factor, point.L * factor, point.rho};
}

double apply_deviation(double rho, double pfa_amplitude) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  return rho * pfa_amplitude;
}

double deviation_at(const DeviationCurve& curve, double kL) {
  curve.validate();
  if (curve.points.empty()) throw DomainError("deviation curve is empty");
  // collapse all points onto kL; equal kL within tolerance are averaged
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve.points) pts.emplace_back(std::log(p.kL()), p.rho);
  std::sort(pts.begin(), pts.end());
  std::vector<double> x, y;
  std::vector<int> count;
  for (const auto& [u, r] : pts) {
    if (!x.empty() && same_u(x.back(), u)) {
      y.back() += r;
      ++count.back();
    } else {
      x.push_back(u);
      y.push_back(r);
      count.push_back(1);
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= count[i];
  const double u = std::log(kL);
  constexpr double slack = 1e-12;
  if (u < x.front() - slack * std::max(1.0, std::abs(x.front())) ||
      u > x.back() + slack * std::max(1.0, std::abs(x.back())))
    throw DomainError("kL outside the range covered by the deviation data");
  return MonotoneCubic(x, y)(u);
}

std::vector<ValidityReport::Flag> ValidityReport::flags() const {
  std::vector<Flag> out = {
      {"a1/L", ratio_a1_L, ratio_a1_L > warn_threshold},
      {"a2/L", ratio_a2_L, ratio_a2_L > warn_threshold},
      {"a1/lambda_p", ratio_a1_lp, ratio_a1_lp > warn_threshold},
      {"a2/lambda_p", ratio_a2_lp, ratio_a2_lp > warn_threshold},
      {"a1/lambda_c", ratio_a1_lc, ratio_a1_lc > warn_threshold},
      {"a2/lambda_c", ratio_a2_lc, ratio_a2_lc > warn_threshold},
      {"L/lambda_c", ratio_L_lc, ratio_L_lc > separation_threshold},
  };
  return out;
}

ValidityReport validity_diagnostics(const CorrugatedGeometry& geom, const PlasmaModel& model,
                                    double warn_threshold) {
  geom.validate();
  if (!(warn_threshold > 0.0)) throw DomainError("warn threshold must be positive");
  ValidityReport r;
  r.warn_threshold = warn_threshold;
  r.ratio_a1_L = geom.a1 / geom.L;
  r.ratio_a2_L = geom.a2 / geom.L;
  r.ratio_a1_lp = geom.a1 / model.lambda_p();
  r.ratio_a2_lp = geom.a2 / model.lambda_p();
  r.ratio_a1_lc = geom.a1 / geom.lambda_c;
  r.ratio_a2_lc = geom.a2 / geom.lambda_c;
  r.ratio_L_lc = geom.L / geom.lambda_c;
  return r;
}

}  // namespace casimir
