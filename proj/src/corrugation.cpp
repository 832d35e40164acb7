#include "casimir/corrugation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/golden_section.hpp"
#include "casimir/kernels.hpp"

namespace casimir {

namespace {

constexpr double phase_average_tolerance = 1e-9;
constexpr std::size_t scan_points = 64;

struct PeriodicMean {
  double value;
  double change;
};

// Mean of a smooth periodic g over x in [0, period) with the trapezoid rule,
// doubling the sample count until successive means agree to
// phase_average_tolerance relative to <|g|>.
template <class G>
PeriodicMean periodic_mean(G&& g, double period) {
  std::size_t n = 16;
  double sum = 0.0, abs_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = g(period * double(j) / double(n));
    sum += v;
    abs_sum += std::abs(v);
  }
  double mean = sum / double(n);
  while (n < (std::size_t{1} << 18)) {
    // the new samples sit at the midpoints of the old grid
    for (std::size_t j = 0; j < n; ++j) {
      const double v = g(period * (double(j) + 0.5) / double(n));
      sum += v;
      abs_sum += std::abs(v);
    }
    n *= 2;
    const double refined = sum / double(n);
    const double change = std::abs(refined - mean);
    mean = refined;
    if (change <= phase_average_tolerance * (abs_sum / double(n))) return {mean, change};
  }
  throw ConvergenceError("phase average did not converge", mean, std::abs(mean));
}

ChebyshevInterpolant sample_gap_range(const CorrugatedGeometry& geom,
                                      const std::function<double(double)>& f,
                                      const QuadratureSettings& settings) {
  // a1 = a2 = 0 still gets a non-degenerate table
  const double half_width = std::max(geom.a1 + geom.a2, 1e-6 * geom.L);
  const double tol = std::max(1e-9, settings.rel_tolerance);
  return ChebyshevInterpolant::build(f, geom.L - half_width, geom.L + half_width, tol, 512,
                                     settings.execution);
}

double table_max_abs(const ChebyshevInterpolant& table) {
  return std::max(std::abs(table(table.lower())), std::abs(table(table.upper())));
}

}  // namespace

double CorrugatedGeometry::k() const noexcept { return 2.0 * pi / lambda_c; }

void CorrugatedGeometry::validate() const {
  if (!(lambda_c > 0.0) || !std::isfinite(lambda_c))
    throw DomainError("corrugation wavelength must be positive");
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) throw DomainError("corrugation amplitudes must be >= 0");
  if (!(L > a1 + a2) || !std::isfinite(L))
    throw DomainError("mean separation must exceed a1 + a2 (surfaces would touch)");
  if (R && !(*R > 0.0)) throw DomainError("sphere radius must be positive");
}

double CorrugatedGeometry::require_radius() const {
  if (!R) throw DomainError("sphere radius R is required for sphere-plate quantities");
  return *R;
}

CorrugatedGeometry CorrugatedGeometry::with_radius(double radius) const {
  CorrugatedGeometry g = *this;
  g.R = radius;
  return g;
}

CorrugatedGeometry CorrugatedGeometry::with_amplitudes_scaled(double s) const {
  CorrugatedGeometry g = *this;
  g.a1 *= s;
  g.a2 *= s;
  return g;
}

double local_gap(const CorrugatedGeometry& geom, double x, LateralShift shift) {
  const double k = geom.k();
  return geom.L + geom.a1 * std::cos(k * x + k * shift.b) - geom.a2 * std::cos(k * x);
}

CorrugationModel::CorrugationModel(CorrugatedGeometry geom, MaterialKind kind,
                                   QuadratureSettings settings)
    : geom_(std::move(geom)), kind_(std::move(kind)), settings_(settings) {
  geom_.validate();
  settings_.validate();
  energy_at_mean_ = energy_per_area(kind_, geom_.L, settings_).value;
  energy_ = sample_gap_range(
      geom_, [this](double d) { return energy_per_area(kind_, d, settings_).value; }, settings_);
  table_rel_error_ = energy_.est_rel_error() + settings_.rel_tolerance;
  lazy_ = std::make_shared<LazyTables>();
}

double CorrugationModel::plate_energy(double d) const { return energy_(d); }

const ChebyshevInterpolant& CorrugationModel::tail_table() const {
  std::call_once(lazy_->tail_once, [this] {
    lazy_->tail = sample_gap_range(
        geom_, [this](double d) { return energy_tail_integral(kind_, d, settings_).value; },
        settings_);
  });
  return *lazy_->tail;
}

const ChebyshevInterpolant& CorrugationModel::derivative_table() const {
  std::call_once(lazy_->derivative_once, [this] {
    lazy_->derivative = sample_gap_range(
        geom_, [this](double d) { return pressure(kind_, d, settings_).value; }, settings_);
  });
  return *lazy_->derivative;
}

ForceResult CorrugationModel::averaged_energy(LateralShift shift) const {
  if (geom_.a1 == 0.0 && geom_.a2 == 0.0) return {energy_at_mean_, std::abs(energy_at_mean_) * settings_.rel_tolerance};
  const auto m = periodic_mean(
      [&](double x) { return energy_(local_gap(geom_, x, shift)); }, geom_.lambda_c);
  return {m.value, std::abs(m.value) * table_rel_error_ + m.change};
}

ForceResult CorrugationModel::lateral_force_sphere(LateralShift shift) const {
  const double R = geom_.require_radius();
  const double k = geom_.k();
  const double prefactor = 2.0 * pi * R * geom_.a1 * k;
  if (prefactor == 0.0) return {0.0, 0.0};
  // <E(L) sin> = 0 exactly; subtracting it removes the dominant cancellation
  const double e0 = energy_(geom_.L);
  const auto m = periodic_mean(
      [&](double x) {
        return (energy_(local_gap(geom_, x, shift)) - e0) * std::sin(k * x + k * shift.b);
      },
      geom_.lambda_c);
  const double table_abs = table_rel_error_ * table_max_abs(energy_);
  return {-prefactor * m.value, prefactor * (table_abs + m.change)};
}

ForceResult CorrugationModel::sphere_potential(LateralShift shift) const {
  const double R = geom_.require_radius();
  const auto& tail = tail_table();
  const auto m = periodic_mean(
      [&](double x) { return tail(local_gap(geom_, x, shift)); }, geom_.lambda_c);
  const double rel = tail.est_rel_error() + settings_.rel_tolerance;
  return {2.0 * pi * R * m.value, 2.0 * pi * R * (std::abs(m.value) * rel + m.change)};
}

ForceResult CorrugationModel::lateral_force_plate(LateralShift shift) const {
  const double k = geom_.k();
  const double prefactor = geom_.a1 * k;
  if (prefactor == 0.0) return {0.0, 0.0};
  const auto& deriv = derivative_table();
  const double p0 = deriv(geom_.L);
  const auto m = periodic_mean(
      [&](double x) {
        return (deriv(local_gap(geom_, x, shift)) - p0) * std::sin(k * x + k * shift.b);
      },
      geom_.lambda_c);
  const double rel = deriv.est_rel_error() + settings_.rel_tolerance;
  return {prefactor * m.value, prefactor * (rel * table_max_abs(deriv) + m.change)};
}

ForceResult CorrugationModel::linear_amplitude_sphere() const {
  return casimir::linear_amplitude_sphere(geom_, kind_, settings_);
}

ForceResult CorrugationModel::linear_amplitude_plate() const {
  const auto curvature = energy_derivative(kind_, geom_.L, 2, settings_);
  const double factor = 0.5 * geom_.k() * geom_.a1 * geom_.a2;
  return {factor * std::abs(curvature.value), factor * curvature.est_error};
}

AmplitudeResult CorrugationModel::complete_amplitude_sphere() const {
  geom_.require_radius();
  const double period = geom_.lambda_c;
  const double k = geom_.k();

  std::vector<ForceResult> scan;
  kernels::generate(settings_.execution, scan_points, scan, [&](std::size_t j) {
    return lateral_force_sphere({period * double(j) / double(scan_points)});
  });

  std::size_t best = 0;
  double sin_sum = 0.0, cos_sum = 0.0;
  for (std::size_t j = 0; j < scan_points; ++j) {
    if (std::abs(scan[j].value) > std::abs(scan[best].value)) best = j;
    const double b = period * double(j) / double(scan_points);
    sin_sum += scan[j].value * std::sin(k * b);
    cos_sum += scan[j].value * std::cos(k * b);
  }

  AmplitudeResult out;
  out.first_harmonic = 2.0 * std::hypot(sin_sum, cos_sum) / double(scan_points);
  if (scan[best].value == 0.0) {
    out.amplitude = 0.0;
    out.b_max = 0.0;
    out.est_error = 0.0;
    return out;
  }

  const double step = period / double(scan_points);
  const double centre = period * double(best) / double(scan_points);
  const auto peak = golden_section_maximize(
      [&](double b) { return std::abs(lateral_force_sphere({b}).value); }, centre - step,
      centre + step, period * 1e-6);

  out.amplitude = peak.value;
  out.b_max = std::fmod(std::fmod(peak.x, period) + period, period);
  out.est_error = lateral_force_sphere({peak.x}).est_error;
  return out;
}

ForceResult CorrugationModel::higher_order_ratio() const {
  if (geom_.a1 * geom_.a2 == 0.0)
    throw DomainError("higher-order ratio undefined: both amplitudes vanish when a1 * a2 = 0");
  const auto linear = linear_amplitude_sphere();
  const auto complete = complete_amplitude_sphere();
  const double ratio = complete.amplitude / linear.value;
  const double rel = complete.est_error / complete.amplitude + linear.est_error / linear.value;
  return {ratio, ratio * rel};
}

ForceResult averaged_energy(const CorrugatedGeometry& geom, LateralShift shift,
                            const MaterialKind& kind, const QuadratureSettings& settings) {
  return CorrugationModel(geom, kind, settings).averaged_energy(shift);
}

ForceResult lateral_force_sphere(const CorrugatedGeometry& geom, LateralShift shift,
                                 const MaterialKind& kind, const QuadratureSettings& settings) {
  return CorrugationModel(geom, kind, settings).lateral_force_sphere(shift);
}

ForceResult lateral_force_plate(const CorrugatedGeometry& geom, LateralShift shift,
                                const MaterialKind& kind, const QuadratureSettings& settings) {
  return CorrugationModel(geom, kind, settings).lateral_force_plate(shift);
}

ForceResult linear_amplitude_sphere(const CorrugatedGeometry& geom, const MaterialKind& kind,
                                    const QuadratureSettings& settings) {
  geom.validate();
  const double R = geom.require_radius();
  const double factor = pi * R * geom.k() * geom.a1 * geom.a2;
  if (factor == 0.0) return {0.0, 0.0};
  const auto p = pressure(kind, geom.L, settings);
  return {factor * p.value, factor * p.est_error};
}

AmplitudeResult complete_amplitude_sphere(const CorrugatedGeometry& geom, const MaterialKind& kind,
                                          const QuadratureSettings& settings) {
  return CorrugationModel(geom, kind, settings).complete_amplitude_sphere();
}

ForceResult higher_order_ratio(const CorrugatedGeometry& geom, const MaterialKind& kind,
                               const QuadratureSettings& settings) {
  if (geom.a1 * geom.a2 == 0.0)
    throw DomainError("higher-order ratio undefined: both amplitudes vanish when a1 * a2 = 0");
  return CorrugationModel(geom, kind, settings).higher_order_ratio();
}

double calibrate_radius(const CorrugatedGeometry& geom, const MaterialKind& kind, double target,
                        const QuadratureSettings& settings) {
  if (!(target > 0.0)) throw DomainError("target amplitude must be positive");
  CorrugatedGeometry g = geom;
  g.R.reset();
  g.validate();
  const double per_radius = pi * g.k() * g.a1 * g.a2;
  if (per_radius == 0.0)
    throw DomainError("cannot calibrate radius: a1 * a2 = 0 gives zero linear amplitude");
  return target / (per_radius * pressure(kind, g.L, settings).value);
}

}  // namespace casimir
