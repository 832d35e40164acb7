#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "casimir/kernels.hpp"

namespace casimir {

/// Chebyshev interpolant on [a, b] built from Chebyshev-Lobatto samples.
///
/// `build` doubles the number of intervals (16, 32, ...) reusing previous
/// samples, and stops once the previous interpolant reproduces all freshly
/// sampled values to `rel_tolerance * max|f|`. Samples at each level are
/// taken through the execution kernels, so an expensive `f` is evaluated
/// concurrently.
class ChebyshevInterpolant {
 public:
  static ChebyshevInterpolant build(const std::function<double(double)>& f, double a, double b,
                                    double rel_tolerance, std::size_t max_degree = 512,
                                    Execution exec = Execution::parallel);

  /// Direct construction from samples at the n+1 Lobatto nodes
  /// x_j = mid + half * cos(pi j / n), j = 0..n.
  static ChebyshevInterpolant from_lobatto_samples(std::span<const double> samples, double a,
                                                   double b);

  double operator()(double x) const;
  double derivative(double x) const;

  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  /// Largest relative deviation seen in the last refinement check.
  double est_rel_error() const noexcept { return est_rel_error_; }
  std::size_t samples_used() const noexcept { return samples_used_; }

 private:
  double a_ = -1.0;
  double b_ = 1.0;
  std::vector<double> coeffs_;
  std::vector<double> deriv_coeffs_;
  double est_rel_error_ = 0.0;
  std::size_t samples_used_ = 0;
};

}  // namespace casimir
