#pragma once

// Beyond-PFA deviation curves rho(k, L): ingestion, kL-collapse test,
// rescaling, and the small-parameter diagnostics of a corrugated setup.

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "casimir/corrugation.hpp"
#include "casimir/dielectric.hpp"

namespace casimir {

struct DeviationPoint {
  double k = 0.0;    ///< corrugation wavevector, 1/m
  double L = 0.0;    ///< separation, m
  double rho = 0.0;  ///< beyond-PFA / PFA amplitude ratio
  double kL() const noexcept { return k * L; }
};

struct DeviationCurve {
  std::vector<DeviationPoint> points;
  std::string label;

  /// rho > 0, k > 0, L > 0 and unique (k, L) pairs; throws DomainError.
  void validate() const;
};

/// Parses `k_rad_per_m,L_m,rho` CSV. Blank lines and lines starting with '#'
/// are skipped; the first remaining line must be the header. Errors carry
/// the 1-based line number.
DeviationCurve read_deviation_csv(std::istream& in, const std::string& label);
DeviationCurve read_deviation_csv(const std::filesystem::path& path);

/// Splits a curve into one curve per distinct L, ordered by L.
std::vector<DeviationCurve> split_by_separation(const DeviationCurve& curve);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant. Evaluation outside
/// [front, back] clamps to the end values.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, slope_;
};

/// Largest relative spread max|rho_i - rho_j| / mean(rho) over a common kL grid.
/// Each curve must carry a single L; curves are interpolated on log(kL).
/// Throws DomainError with fewer than two curves or no kL overlap.
double collapse_check(const std::vector<DeviationCurve>& curves);

/// (k, L, rho) -> (k / s, s L, rho).
DeviationPoint rescale_point(const DeviationPoint& point, double factor);

/// rho * pfa_amplitude.
double apply_deviation(double rho, double pfa_amplitude);

/// rho at a given kL, interpolated on the kL-collapsed data of `curve`.
/// Throws DomainError when kL lies outside the data.
double deviation_at(const DeviationCurve& curve, double kL);

struct ValidityReport {
  double ratio_a1_L = 0.0;
  double ratio_a2_L = 0.0;
  double ratio_a1_lp = 0.0;
  double ratio_a2_lp = 0.0;
  double ratio_a1_lc = 0.0;
  double ratio_a2_lc = 0.0;
  double ratio_L_lc = 0.0;
  double warn_threshold = 0.1;
  double separation_threshold = 1.0 / 3.0;

  struct Flag {
    std::string name;
    double value;
    bool warn;
  };
  /// Small-amplitude ratios, each warned when above warn_threshold, followed by
  /// L / lambda_c, warned when above separation_threshold (PFA expected
  /// accurate only when L is several times smaller than lambda_c).
  std::vector<Flag> flags() const;
};

ValidityReport validity_diagnostics(const CorrugatedGeometry& geom, const PlasmaModel& model,
                                    double warn_threshold = 0.1);

}  // namespace casimir
