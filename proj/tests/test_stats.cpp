#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/stats.hpp"
#include "doctest.h"

using namespace casimir;

namespace {

// erfc by Maclaurin series for erf (x < 2.5) or Lentz continued fraction.
long double erfc_oracle(long double x) {
  const long double pi = 3.141592653589793238462643383279502884L;
  if (x < 2.5L) {
    long double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
      term *= -x * x / n;
      sum += term / (2 * n + 1);
    }
    return 1.0L - 2.0L / std::sqrt(pi) * sum;
  }
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  long double f = x, c = x, d = 0.0L;
  for (int n = 1; n < 500; ++n) {
    const long double a = n * 0.5L;
    d = x + a * d;
    c = x + a / c;
    d = 1.0L / d;
    f *= c * d;
  }
  return std::exp(-x * x) / std::sqrt(pi) / f;
}

const Measurement experiment{0.32e-12, 0.077e-12, 0.95};

}  // namespace

TEST_CASE("quantiles and sigma") {
  CHECK(two_sided_quantile(0.95) == doctest::Approx(1.9599639845400542).epsilon(1e-14));
  CHECK(two_sided_quantile(0.6827) == doctest::Approx(1.0000217133229992).epsilon(1e-12));
  CHECK(sigma_from_ci(experiment) == doctest::Approx(3.9286436183198351e-14).epsilon(1e-13));
  CHECK_THROWS_AS(two_sided_quantile(0.0), DomainError);
  CHECK_THROWS_AS(two_sided_quantile(1.0), DomainError);
  CHECK_THROWS_AS((Measurement{1.0, -1.0, 0.95}.validate()), DomainError);
  CHECK_THROWS_AS((Measurement{1.0, 1.0, 1.5}.validate()), DomainError);
}

TEST_CASE("compatibility probabilities") {
  CHECK(compatibility_probability(experiment, 0.20e-12) == doctest::Approx(0.0022544403637923531).epsilon(1e-10));
  CHECK(compatibility_probability_one_sided(experiment, 0.20e-12) ==
        doctest::Approx(0.0011272201818961766).epsilon(1e-10));
  CHECK(compatibility_probability(experiment, 0.33e-12) == doctest::Approx(0.79907780553393707).epsilon(1e-10));
  CHECK(compatibility_probability(experiment, 0.28e-12) == doctest::Approx(0.30860044805773707).epsilon(1e-10));
  CHECK(compatibility_probability(experiment, experiment.value) == 1.0);

  for (double d = 0.0; d < 0.3e-12; d += 0.01e-12) {
    CHECK(compatibility_probability(experiment, experiment.value + d) ==
          doctest::Approx(compatibility_probability(experiment, experiment.value - d)).epsilon(1e-9));
    CHECK(compatibility_probability(experiment, experiment.value + d + 0.01e-12) <=
          compatibility_probability(experiment, experiment.value + d));
  }
}

TEST_CASE("tail probability against series and continued fraction") {
  // with sigma = 1/sqrt(2) the two-sided probability at |delta| = x is erfc(x)
  const double z = two_sided_quantile(0.95);
  const Measurement unit{0.0, z / std::sqrt(2.0), 0.95};
  for (int i = 0; i <= 60; ++i) {
    const double x = 0.1 * i;
    const double expected = static_cast<double>(erfc_oracle(x));
    CHECK(compatibility_probability(unit, x) == doctest::Approx(expected).epsilon(1e-12));
  }
}
