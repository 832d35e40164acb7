#include "casimir/chebyshev.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {

double clenshaw(std::span<const double> c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

std::vector<double> lobatto_nodes(std::size_t n, double a, double b) {
  std::vector<double> x(n + 1);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t j = 0; j <= n; ++j) x[j] = mid + half * std::cos(pi * double(j) / double(n));
  return x;
}

}  // namespace

ChebyshevInterpolant ChebyshevInterpolant::from_lobatto_samples(std::span<const double> f,
                                                                double a, double b) {
  if (f.size() < 2) throw DomainError("need at least two Lobatto samples");
  if (!(b > a)) throw DomainError("empty interpolation interval");
  const std::size_t n = f.size() - 1;
  ChebyshevInterpolant p;
  p.a_ = a;
  p.b_ = b;
  p.coeffs_.assign(n + 1, 0.0);
  // discrete cosine transform (type I)
  for (std::size_t k = 0; k <= n; ++k) {
    double sum = 0.5 * (f[0] + ((k % 2 == 0) ? f[n] : -f[n]));
    for (std::size_t j = 1; j < n; ++j) sum += f[j] * std::cos(pi * double(j * k % (2 * n)) / double(n));
    p.coeffs_[k] = 2.0 * sum / double(n);
  }
  p.coeffs_[0] *= 0.5;
  p.coeffs_[n] *= 0.5;

  // derivative series, in the scaled variable t, then chain rule
  p.deriv_coeffs_.assign(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const double next = (k + 2 <= n) ? p.deriv_coeffs_[k + 2] : 0.0;
    p.deriv_coeffs_[k] = next + 2.0 * double(k + 1) * p.coeffs_[k + 1];
  }
  p.deriv_coeffs_[0] *= 0.5;
  const double scale = 2.0 / (b - a);
  for (auto& c : p.deriv_coeffs_) c *= scale;
  p.samples_used_ = f.size();
  return p;
}

ChebyshevInterpolant ChebyshevInterpolant::build(const std::function<double(double)>& f,
                                                 double a, double b, double rel_tolerance,
                                                 std::size_t max_degree, Execution exec) {
  if (!(b > a)) throw DomainError("empty interpolation interval");
  std::size_t n = 16;
  std::vector<double> x = lobatto_nodes(n, a, b);
  std::vector<double> samples(x.size());
  kernels::tabulate(exec, x, samples, f);
  ChebyshevInterpolant current = from_lobatto_samples(samples, a, b);
  std::size_t total = samples.size();

  while (true) {
    const std::size_t m = 2 * n;
    const auto fine = lobatto_nodes(m, a, b);
    // new nodes are the odd-indexed ones
    std::vector<double> fresh_x;
    for (std::size_t j = 1; j < m; j += 2) fresh_x.push_back(fine[j]);
    std::vector<double> fresh(fresh_x.size());
    kernels::tabulate(exec, fresh_x, fresh, f);
    total += fresh.size();

    std::vector<double> merged(m + 1);
    for (std::size_t j = 0; j <= n; ++j) merged[2 * j] = samples[j];
    for (std::size_t j = 0; j < fresh.size(); ++j) merged[2 * j + 1] = fresh[j];

    double fmax = 0.0, dev = 0.0;
    for (double v : merged) fmax = std::max(fmax, std::abs(v));
    for (std::size_t j = 0; j < fresh.size(); ++j)
      dev = std::max(dev, std::abs(current(fresh_x[j]) - fresh[j]));
    const double rel = fmax > 0.0 ? dev / fmax : dev;

    ChebyshevInterpolant refined = from_lobatto_samples(merged, a, b);
    refined.est_rel_error_ = rel;
    refined.samples_used_ = total;
    if (rel <= rel_tolerance) return refined;
    if (m >= max_degree) {
      throw ConvergenceError("Chebyshev interpolant did not reach the requested accuracy",
                             refined(0.5 * (a + b)), rel * fmax);
    }
    current = std::move(refined);
    samples = std::move(merged);
    n = m;
  }
}

double ChebyshevInterpolant::operator()(double x) const {
  const double t = (2.0 * x - (a_ + b_)) / (b_ - a_);
  return clenshaw(coeffs_, t);
}

double ChebyshevInterpolant::derivative(double x) const {
  const double t = (2.0 * x - (a_ + b_)) / (b_ - a_);
  return clenshaw(deriv_coeffs_, t);
}

}  // namespace casimir
