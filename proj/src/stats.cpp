#include "casimir/stats.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "casimir/errors.hpp"

namespace casimir {

void Measurement::validate() const {
  if (!(ci_halfwidth > 0.0)) throw DomainError("confidence-interval half-width must be positive");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw DomainError("confidence level must lie in (0, 1)");
  if (!std::isfinite(value)) throw DomainError("measured value must be finite");
}

double two_sided_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw DomainError("confidence level must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erf_inv(confidence);
}

double sigma_from_ci(const Measurement& m) {
  m.validate();
  return m.ci_halfwidth / two_sided_quantile(m.confidence);
}

double compatibility_probability(const Measurement& m, double theory) {
  const double sigma = sigma_from_ci(m);
  return std::erfc(std::abs(theory - m.value) / (sigma * std::numbers::sqrt2));
}

double compatibility_probability_one_sided(const Measurement& m, double theory) {
  return 0.5 * compatibility_probability(m, theory);
}

}  // namespace casimir
