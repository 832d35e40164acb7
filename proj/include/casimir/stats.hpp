#pragma once

namespace casimir {

/// A measured value with a symmetric confidence interval.
struct Measurement {
  double value = 0.0;         ///< N
  double ci_halfwidth = 0.0;  ///< N
  double confidence = 0.95;

  void validate() const;
};

/// Two-sided standard normal quantile: P(|Z| <= z) = confidence.
double two_sided_quantile(double confidence);

/// Gaussian sigma implied by the confidence interval.
double sigma_from_ci(const Measurement& m);

/// Two-sided tail probability of a deviation at least |theory - value|.
double compatibility_probability(const Measurement& m, double theory);

/// One-sided tail probability (half the two-sided value).
double compatibility_probability_one_sided(const Measurement& m, double theory);

}  // namespace casimir
