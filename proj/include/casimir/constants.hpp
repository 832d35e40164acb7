#pragma once

#include <numbers>

namespace casimir {

/// CODATA 2018 values, SI units throughout.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double c = 2.99792458e8;        // m / s
  static constexpr const char* version = "CODATA 2018";
};

inline constexpr double pi = std::numbers::pi;

/// omega_P = 2 pi c / lambda_P. Throws DomainError for lambda_p <= 0.
double plasma_frequency(double lambda_p);

}  // namespace casimir
