#include "casimir/dielectric.hpp"

#include <cmath>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

void check_arguments(double xi, double k_perp) {
  if (!(xi > 0.0)) throw DomainError("imaginary frequency must be positive");
  if (!(k_perp >= 0.0)) throw DomainError("transverse wavenumber must be non-negative");
}

}  // namespace

PlasmaModel::PlasmaModel(double lambda_p)
    : lambda_p_(lambda_p), omega_p_(plasma_frequency(lambda_p)) {}

std::string describe(const MaterialKind& kind) {
  if (std::holds_alternative<IdealMetal>(kind)) return "ideal";
  std::ostringstream os;
  os.precision(17);
  os << "plasma(lambda_p=" << std::get<PlasmaModel>(kind).lambda_p() << " m)";
  return os.str();
}

double permittivity_imag(const PlasmaModel& model, double xi) {
  if (!(xi > 0.0)) throw DomainError("imaginary frequency must be positive");
  const double ratio = model.omega_p() / xi;
  return 1.0 + ratio * ratio;
}

double fresnel_tm(const MaterialKind& kind, double xi, double k_perp) {
  check_arguments(xi, k_perp);
  if (std::holds_alternative<IdealMetal>(kind)) return 1.0;
  const auto& model = std::get<PlasmaModel>(kind);
  const double eps = permittivity_imag(model, xi);
  const double xc = xi / PhysicalConstants::c;
  const double q = std::sqrt(k_perp * k_perp + xc * xc);
  const double qm = std::sqrt(k_perp * k_perp + eps * xc * xc);
  return (eps * q - qm) / (eps * q + qm);
}

double fresnel_te(const MaterialKind& kind, double xi, double k_perp) {
  check_arguments(xi, k_perp);
  if (std::holds_alternative<IdealMetal>(kind)) return -1.0;
  const auto& model = std::get<PlasmaModel>(kind);
  const double eps = permittivity_imag(model, xi);
  const double xc = xi / PhysicalConstants::c;
  const double q = std::sqrt(k_perp * k_perp + xc * xc);
  const double qm = std::sqrt(k_perp * k_perp + eps * xc * xc);
  return (q - qm) / (q + qm);
}

ReflectionPair reflection_scaled(double omega, double s, double y) noexcept {
  // (eps - 1) s^2 = omega^2, so q_m L = sqrt(y^2 + omega^2) for every s.
  const double ym = std::hypot(y, omega);
  // Multiply the TM numerator and denominator by s^2 to remove the 1/s^2 pole.
  const double a = (s * s + omega * omega) * y;
  const double b = s * s * ym;
  ReflectionPair r;
  r.tm = (a - b) / (a + b);
  // y - ym loses digits when omega << y; use the conjugate form.
  r.te = -(omega * omega) / ((y + ym) * (y + ym));
  return r;
}

}  // namespace casimir
