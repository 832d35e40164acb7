#include "casimir/lifshitz.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

using lifshitz_detail::Quantity;

namespace {

constexpr double hbar_c = PhysicalConstants::hbar * PhysicalConstants::c;

// Scaled integrand for one polarization with reflection amplitude r.
// x = r^2 exp(-2y); 1 - x is taken from expm1 so that r^2 = 1, y -> 0 is exact.
double polarization_term(Quantity quantity, double r, double y) {
  if (r == 0.0) return 0.0;
  const double log_x = 2.0 * std::log(std::abs(r)) - 2.0 * y;
  const double x = std::exp(log_x);
  if (x == 0.0) return 0.0;
  const double one_minus_x = -std::expm1(log_x);
  switch (quantity) {
    case Quantity::energy:
      return y * (x < 0.5 ? std::log1p(-x) : std::log(one_minus_x));
    case Quantity::pressure:
      return y * y * x / one_minus_x;
    case Quantity::curvature:
      return y * y * y * x / (one_minus_x * one_minus_x);
    case Quantity::tail:
      return dilog(x);
  }
  return 0.0;
}

double integrand(const MaterialKind& kind, Quantity quantity, double omega, double s, double y) {
  if (std::holds_alternative<IdealMetal>(kind)) return 2.0 * polarization_term(quantity, 1.0, y);
  const ReflectionPair r = reflection_scaled(omega, s, y);
  return polarization_term(quantity, r.tm, y) + polarization_term(quantity, r.te, y);
}

double scaled_omega(const MaterialKind& kind, double L) {
  if (const auto* plasma = std::get_if<PlasmaModel>(&kind))
    return plasma->omega_p() * L / PhysicalConstants::c;
  return 0.0;
}

double prefactor(Quantity quantity, double L) {
  switch (quantity) {
    case Quantity::energy:
      return hbar_c / (4.0 * pi * pi * L * L * L);
    case Quantity::pressure:
      return hbar_c / (2.0 * pi * pi * L * L * L * L);
    case Quantity::curvature:
      return -hbar_c / (pi * pi * L * L * L * L * L);
    case Quantity::tail:
      return -hbar_c / (8.0 * pi * pi * L * L);
  }
  return 0.0;
}

struct SliceResult {
  double value;
  double est_error;
  std::size_t evaluations;
};

SliceResult inner_integral(const MaterialKind& kind, Quantity quantity, double omega, double s,
                           const quadrature::Tolerance& tol) {
  auto f = [&](double t) {
    const double one_minus_t = 1.0 - t;
    const double y = s + t / one_minus_t;
    if (!std::isfinite(y)) return 0.0;
    return integrand(kind, quantity, omega, s, y) / (one_minus_t * one_minus_t);
  };
  // An unconverged inner rule still returns its estimate; its error feeds the
  // outer rule, which then decides whether the total meets the tolerance.
  const auto r = quadrature::integrate(f, 0.0, 1.0, tol);
  return {r.value, r.est_error, r.evaluations};
}

void check_separation(double L) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw DomainError("separation must be positive and finite, got " + std::to_string(L));
}

PlatePairResult lifshitz_integral(const MaterialKind& kind, Quantity quantity, double L,
                                  const QuadratureSettings& settings) {
  settings.validate();
  check_separation(L);
  const double omega = scaled_omega(kind, L);
  const double scale = prefactor(quantity, L);

  quadrature::Tolerance inner_tol;
  inner_tol.rel = 0.1 * settings.rel_tolerance;
  inner_tol.abs = 0.0;
  inner_tol.max_subdivisions = settings.max_subdivisions;

  std::size_t inner_evaluations = 0;
  std::vector<SliceResult> slices;

  auto batch = [&](std::span<const double> u, std::span<double> fu, std::span<double> noise) {
    kernels::generate(settings.execution, u.size(), slices, [&](std::size_t i) {
      const double one_minus_u = 1.0 - u[i];
      const double s = u[i] / one_minus_u;
      if (!std::isfinite(s)) return SliceResult{0.0, 0.0, 0};
      const double jac = 1.0 / (one_minus_u * one_minus_u);
      SliceResult r = inner_integral(kind, quantity, omega, s, inner_tol);
      r.value *= jac;
      r.est_error *= jac;
      return r;
    });
    for (std::size_t i = 0; i < u.size(); ++i) {
      fu[i] = slices[i].value;
      noise[i] = slices[i].est_error;
      inner_evaluations += slices[i].evaluations;
    }
  };

  quadrature::Tolerance outer_tol;
  outer_tol.rel = settings.rel_tolerance;
  outer_tol.abs = settings.abs_floor / std::abs(scale);
  outer_tol.max_subdivisions = settings.max_subdivisions;
  const auto r = quadrature::integrate_batched(batch, 0.0, 1.0, outer_tol);

  PlatePairResult out;
  out.value = scale * r.value;
  out.est_error = std::abs(scale) * r.est_error;
  out.evaluations = inner_evaluations;
  if (!r.converged) {
    throw ConvergenceError("Lifshitz frequency integral did not converge within " +
                               std::to_string(settings.max_subdivisions) + " subdivisions",
                           out.value, out.est_error);
  }
  return out;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance <= 1e-3))
    throw DomainError("rel_tolerance must lie in (0, 1e-3]");
  if (!(abs_floor >= 0.0)) throw DomainError("abs_floor must be non-negative");
  if (max_subdivisions < 50) throw DomainError("max_subdivisions must be at least 50");
}

QuadratureSettings QuadratureSettings::tightened(double factor) const {
  QuadratureSettings copy = *this;
  copy.rel_tolerance *= factor;
  return copy;
}

PlatePairResult energy_per_area(const MaterialKind& kind, double L,
                                const QuadratureSettings& settings) {
  return lifshitz_integral(kind, Quantity::energy, L, settings);
}

PlatePairResult pressure(const MaterialKind& kind, double L, const QuadratureSettings& settings) {
  return lifshitz_integral(kind, Quantity::pressure, L, settings);
}

PlatePairResult energy_derivative(const MaterialKind& kind, double L, int order,
                                  const QuadratureSettings& settings) {
  if (order == 1) return lifshitz_integral(kind, Quantity::pressure, L, settings);
  if (order == 2) return lifshitz_integral(kind, Quantity::curvature, L, settings);
  throw DomainError("derivative order must be 1 or 2, got " + std::to_string(order));
}

PlatePairResult energy_tail_integral(const MaterialKind& kind, double D,
                                     const QuadratureSettings& settings) {
  return lifshitz_integral(kind, Quantity::tail, D, settings);
}

double reduction_factor(const PlasmaModel& model, double L, const QuadratureSettings& settings) {
  return energy_per_area(model, L, settings).value / ideal::energy_per_area(L);
}

namespace ideal {

double energy_per_area(double L) {
  check_separation(L);
  return -pi * pi * hbar_c / (720.0 * L * L * L);
}

double pressure(double L) {
  check_separation(L);
  return pi * pi * hbar_c / (240.0 * L * L * L * L);
}

double curvature(double L) { return -4.0 * pressure(L) / L; }

double tail_integral(double D) { return 0.5 * energy_per_area(D) * D; }

}  // namespace ideal

double dilog(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("dilog implemented on [0, 1] only");
  if (x == 1.0) return pi * pi / 6.0;
  if (x > 0.5) {
    // reflection formula
    return pi * pi / 6.0 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
  }
  double term = x;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (add < std::numeric_limits<double>::epsilon() * sum) break;
    term *= x;
  }
  return sum;
}

namespace lifshitz_detail {

double frequency_slice(const MaterialKind& kind, Quantity quantity, double L, double s,
                       double rel_tolerance) {
  check_separation(L);
  quadrature::Tolerance tol;
  tol.rel = rel_tolerance;
  tol.max_subdivisions = 500;
  return inner_integral(kind, quantity, scaled_omega(kind, L), s, tol).value;
}

}  // namespace lifshitz_detail

}  // namespace casimir
