#pragma once

// Zero-temperature Lifshitz theory for two identical parallel half-spaces.
//
// All integrals are written in scaled variables s = xi L / c and y = q L and
// mapped onto the unit square with s = u / (1 - u), y = s + t / (1 - t). The
// outer (frequency) rule hands its 15 nodes at a time to the execution
// kernels; each node runs an independent inner adaptive rule.

#include <cstddef>

#include "casimir/dielectric.hpp"
#include "casimir/kernels.hpp"

namespace casimir {

struct QuadratureSettings {
  double rel_tolerance = 1e-8;
  /// Absolute floor in the unit of the quantity being computed.
  double abs_floor = 0.0;
  std::size_t max_subdivisions = 200;
  Execution execution = Execution::parallel;

  /// Throws DomainError unless rel_tolerance in (0, 1e-3], abs_floor >= 0
  /// and max_subdivisions >= 50.
  void validate() const;
  /// Copy with rel_tolerance scaled by `factor`.
  QuadratureSettings tightened(double factor) const;
};

struct PlatePairResult {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t evaluations = 0;
};

/// Casimir energy per unit area E(L) in J/m^2 (negative).
PlatePairResult energy_per_area(const MaterialKind& kind, double L,
                                const QuadratureSettings& settings = {});

/// Attractive pressure magnitude P(L) = dE/dL in Pa (positive).
PlatePairResult pressure(const MaterialKind& kind, double L,
                         const QuadratureSettings& settings = {});

/// dE/dL (order 1, Pa) or d^2E/dL^2 (order 2, Pa/m), differentiated under the
/// integral sign.
PlatePairResult energy_derivative(const MaterialKind& kind, double L, int order,
                                  const QuadratureSettings& settings = {});

/// Integral of E(z) over z in [D, inf), J/m. Used by the sphere-plate
/// Derjaguin potential.
PlatePairResult energy_tail_integral(const MaterialKind& kind, double D,
                                     const QuadratureSettings& settings = {});

/// E_plasma(L) / E_ideal(L), in (0, 1).
double reduction_factor(const PlasmaModel& model, double L,
                        const QuadratureSettings& settings = {});

namespace ideal {

double energy_per_area(double L);
double pressure(double L);
double curvature(double L);
double tail_integral(double D);

}  // namespace ideal

/// Li2(x) for x in [0, 1].
double dilog(double x);

namespace lifshitz_detail {

enum class Quantity { energy, pressure, curvature, tail };

/// Inner integral over y in [s, inf) of the scaled integrand at fixed s,
/// for a half-space pair at separation L. Exposed for continuity tests at s -> 0.
double frequency_slice(const MaterialKind& kind, Quantity quantity, double L, double s,
                       double rel_tolerance = 1e-12);

}  // namespace lifshitz_detail

}  // namespace casimir
