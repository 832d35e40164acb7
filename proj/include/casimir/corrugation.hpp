#pragma once

// Lateral Casimir force between sinusoidally corrugated surfaces in the
// proximity-force approximation.
//
// Local gap:  d(x, b) = L + a1 cos(k x + k b) - a2 cos(k x),  k = 2 pi / lambda_c.
//
// The plate-plate energy E(d) and its derivatives are sampled once per
// (material, L, amplitudes) on [L - a1 - a2, L + a1 + a2] into Chebyshev
// interpolants; all phase averages run on those.

#include <memory>
#include <mutex>
#include <optional>

#include "casimir/chebyshev.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

struct CorrugatedGeometry {
  double L = 0.0;         ///< mean separation, m
  double lambda_c = 0.0;  ///< corrugation period, m
  double a1 = 0.0;        ///< sphere-side amplitude, m
  double a2 = 0.0;        ///< plate-side amplitude, m
  std::optional<double> R;

  double k() const noexcept;
  /// Throws DomainError unless L > a1 + a2, lambda_c > 0, a1, a2 >= 0, R > 0.
  void validate() const;
  double require_radius() const;
  CorrugatedGeometry with_radius(double radius) const;
  CorrugatedGeometry with_amplitudes_scaled(double s) const;
};

/// Relative lateral displacement of the two corrugations.
struct LateralShift {
  double b = 0.0;
};

double local_gap(const CorrugatedGeometry& geom, double x, LateralShift shift);

struct ForceResult {
  double value = 0.0;
  double est_error = 0.0;
};

struct AmplitudeResult {
  double amplitude = 0.0;  ///< max over b of |F|
  double b_max = 0.0;      ///< shift at which the maximum is attained, in [0, lambda_c)
  double est_error = 0.0;
  /// Magnitude of the fundamental harmonic of F(b) (diagnostic).
  double first_harmonic = 0.0;
};

/// Holds the sampled plate-plate energy for one geometry and material.
/// Construction is the expensive step; all queries are cheap and const.
class CorrugationModel {
 public:
  CorrugationModel(CorrugatedGeometry geom, MaterialKind kind, QuadratureSettings settings = {});

  const CorrugatedGeometry& geometry() const noexcept { return geom_; }
  const MaterialKind& material() const noexcept { return kind_; }
  const QuadratureSettings& settings() const noexcept { return settings_; }

  /// Plate-plate energy at a local gap inside the sampled range.
  double plate_energy(double d) const;
  /// Relative accuracy of the energy table (interpolation plus quadrature).
  double table_rel_error() const noexcept { return table_rel_error_; }

  /// Phase-averaged energy per area, J/m^2.
  ForceResult averaged_energy(LateralShift shift) const;
  /// Sphere-plate lateral force, N.
  ForceResult lateral_force_sphere(LateralShift shift) const;
  /// Derjaguin potential 2 pi R <integral_{d}^{inf} E(z) dz>, J.
  ForceResult sphere_potential(LateralShift shift) const;
  /// Lateral force per area between two corrugated plates, N/m^2.
  ForceResult lateral_force_plate(LateralShift shift) const;

  /// Second-order amplitude pi R k a1 a2 P(L).
  ForceResult linear_amplitude_sphere() const;
  /// (k a1 a2 / 2) |d^2E/dL^2|(L), N/m^2.
  ForceResult linear_amplitude_plate() const;
  /// Max over b of |lateral_force_sphere|: 64-point scan plus golden-section refinement.
  AmplitudeResult complete_amplitude_sphere() const;
  /// complete / linear; throws DomainError when a1 a2 = 0.
  ForceResult higher_order_ratio() const;

 private:
  const ChebyshevInterpolant& tail_table() const;
  const ChebyshevInterpolant& derivative_table() const;

  CorrugatedGeometry geom_;
  MaterialKind kind_;
  QuadratureSettings settings_;
  ChebyshevInterpolant energy_;
  double table_rel_error_ = 0.0;
  double energy_at_mean_ = 0.0;
  // built on first use, shared between copies
  struct LazyTables {
    std::once_flag tail_once;
    std::once_flag derivative_once;
    std::optional<ChebyshevInterpolant> tail;
    std::optional<ChebyshevInterpolant> derivative;
  };
  std::shared_ptr<LazyTables> lazy_;
};

// Free-function forms. Each builds a CorrugationModel for the call.

ForceResult averaged_energy(const CorrugatedGeometry& geom, LateralShift shift,
                            const MaterialKind& kind, const QuadratureSettings& settings = {});
ForceResult lateral_force_sphere(const CorrugatedGeometry& geom, LateralShift shift,
                                 const MaterialKind& kind, const QuadratureSettings& settings = {});
ForceResult lateral_force_plate(const CorrugatedGeometry& geom, LateralShift shift,
                                const MaterialKind& kind, const QuadratureSettings& settings = {});
/// Needs only P(L); does not sample the energy table.
ForceResult linear_amplitude_sphere(const CorrugatedGeometry& geom, const MaterialKind& kind,
                                    const QuadratureSettings& settings = {});
AmplitudeResult complete_amplitude_sphere(const CorrugatedGeometry& geom, const MaterialKind& kind,
                                          const QuadratureSettings& settings = {});
ForceResult higher_order_ratio(const CorrugatedGeometry& geom, const MaterialKind& kind,
                               const QuadratureSettings& settings = {});

/// Radius for which linear_amplitude_sphere equals `target` (N).
double calibrate_radius(const CorrugatedGeometry& geom, const MaterialKind& kind, double target,
                        const QuadratureSettings& settings = {});

}  // namespace casimir
