#pragma once

#include <string>
#include <variant>

namespace casimir {

/// Lossless plasma-model metal, described by its plasma wavelength.
class PlasmaModel {
 public:
  explicit PlasmaModel(double lambda_p);

  double lambda_p() const noexcept { return lambda_p_; }
  double omega_p() const noexcept { return omega_p_; }

 private:
  double lambda_p_;
  double omega_p_;
};

struct IdealMetal {};

using MaterialKind = std::variant<IdealMetal, PlasmaModel>;

std::string describe(const MaterialKind& kind);

/// eps(i xi) = 1 + omega_p^2 / xi^2. Requires xi > 0.
double permittivity_imag(const PlasmaModel& model, double xi);

/// TM reflection coefficient on the imaginary frequency axis, in [0, 1].
double fresnel_tm(const MaterialKind& kind, double xi, double k_perp);

/// TE reflection coefficient on the imaginary frequency axis, in [-1, 0].
double fresnel_te(const MaterialKind& kind, double xi, double k_perp);

struct ReflectionPair {
  double tm;
  double te;
};

/// Reflection coefficients of a plasma half-space in scaled variables
/// s = xi L / c, y = q L, omega = omega_p L / c, with y >= s >= 0.
/// Written so that s = 0 gives the continuous limit (tm -> 1, te finite).
ReflectionPair reflection_scaled(double omega, double s, double y) noexcept;

}  // namespace casimir
