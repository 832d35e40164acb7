#include "casimir/constants.hpp"

#include <string>

#include "casimir/errors.hpp"

namespace casimir {

double plasma_frequency(double lambda_p) {
  if (!(lambda_p > 0.0)) {
    throw DomainError("plasma wavelength must be positive, got " + std::to_string(lambda_p));
  }
  return 2.0 * pi * PhysicalConstants::c / lambda_p;
}

}  // namespace casimir
