#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Argument outside the domain of an operation (non-positive length, etc.).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature or iterative refinement ran out of budget. Carries the
/// best estimate reached so callers can still report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double est_error)
      : std::runtime_error(what), estimate_(estimate), est_error_(est_error) {}

  double estimate() const noexcept { return estimate_; }
  double est_error() const noexcept { return est_error_; }

 private:
  double estimate_;
  double est_error_;
};

/// Malformed configuration or data file. The message names the field or line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace casimir
