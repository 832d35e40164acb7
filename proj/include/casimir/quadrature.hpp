#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature on a finite interval.
//
// The integrand is evaluated in batches: for every interval the 15 Kronrod
// abscissae are handed over at once, so an expensive integrand (an inner
// integral, for nested rules) can fan the batch out over threads. The batch
// callback may also report a per-node error, which is folded into the
// interval error with the Kronrod weights.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace casimir::quadrature {

struct Result {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;
  std::size_t max_subdivisions = 200;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr std::size_t rule_size = 15;

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& other) const { return error < other.error; }
};

inline void abscissae(double a, double b, std::span<double, rule_size> x) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t j = 0; j < 7; ++j) {
    x[2 * j] = centre - half * kronrod_nodes[j];
    x[2 * j + 1] = centre + half * kronrod_nodes[j];
  }
  x[14] = centre;
}

inline Interval apply_rule(double a, double b, std::span<const double, rule_size> fx,
                           std::span<const double, rule_size> noise) {
  const double half = 0.5 * (b - a);
  double kronrod = kronrod_weights[7] * fx[14];
  double gauss = gauss_weights[3] * fx[14];
  double carried = kronrod_weights[7] * noise[14];
  for (std::size_t j = 0; j < 7; ++j) {
    const double pair = fx[2 * j] + fx[2 * j + 1];
    kronrod += kronrod_weights[j] * pair;
    carried += kronrod_weights[j] * (noise[2 * j] + noise[2 * j + 1]);
    if (j % 2 == 1) gauss += gauss_weights[j / 2] * pair;
  }
  return {a, b, kronrod * half,
          std::abs((kronrod - gauss) * half) + std::abs(carried * half)};
}

}  // namespace detail

/// Integrate over [a, b]. `batch(x, fx, noise)` must fill fx[i] = f(x[i]) and
/// noise[i] with the absolute error of fx[i] (zero for exact integrands).
/// Subdivision stops once the summed error falls below
/// max(tol.abs, tol.rel * |value|) or tol.max_subdivisions is reached; in the
/// latter case `converged` is false and the best estimate is returned.
template <class Batch>
Result integrate_batched(Batch&& batch, double a, double b, const Tolerance& tol) {
  using namespace detail;
  std::array<double, 2 * rule_size> x{}, fx{}, noise{};
  Result result;

  auto evaluate = [&](std::span<const std::pair<double, double>> ranges,
                      std::vector<Interval>& out) {
    const std::size_t n = ranges.size() * rule_size;
    for (std::size_t r = 0; r < ranges.size(); ++r)
      abscissae(ranges[r].first, ranges[r].second,
                std::span<double, rule_size>(x.data() + r * rule_size, rule_size));
    std::fill(noise.begin(), noise.begin() + n, 0.0);
    batch(std::span<const double>(x.data(), n), std::span<double>(fx.data(), n),
          std::span<double>(noise.data(), n));
    result.evaluations += n;
    for (std::size_t r = 0; r < ranges.size(); ++r)
      out.push_back(apply_rule(
          ranges[r].first, ranges[r].second,
          std::span<const double, rule_size>(fx.data() + r * rule_size, rule_size),
          std::span<const double, rule_size>(noise.data() + r * rule_size, rule_size)));
  };

  std::vector<Interval> fresh;
  const std::pair<double, double> whole[1] = {{a, b}};
  evaluate(whole, fresh);

  std::priority_queue<Interval> heap;
  double total = fresh[0].value;
  double error = fresh[0].error;
  heap.push(fresh[0]);

  // Re-summing from the heap after every split keeps the running totals free
  // of accumulated cancellation; the heap stays small so this is cheap.
  auto resum = [&]() {
    auto copy = heap;
    total = 0.0;
    error = 0.0;
    while (!copy.empty()) {
      total += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  };

  while (error > std::max(tol.abs, tol.rel * std::abs(total))) {
    if (result.subdivisions >= tol.max_subdivisions) {
      result.value = total;
      result.est_error = error;
      result.converged = false;
      return result;
    }
    const Interval worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval exhausted at double resolution
      result.value = total;
      result.est_error = error;
      result.converged = false;
      return result;
    }
    heap.pop();
    fresh.clear();
    const std::pair<double, double> halves[2] = {{worst.a, mid}, {mid, worst.b}};
    evaluate(halves, fresh);
    heap.push(fresh[0]);
    heap.push(fresh[1]);
    ++result.subdivisions;
    resum();
  }

  result.value = total;
  result.est_error = error;
  result.converged = true;
  return result;
}

/// Scalar convenience wrapper around integrate_batched.
template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol) {
  return integrate_batched(
      [&f](std::span<const double> x, std::span<double> fx, std::span<double>) {
        for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);
      },
      a, b, tol);
}

}  // namespace casimir::quadrature
