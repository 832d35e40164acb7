#include <cmath>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "doctest.h"

using namespace casimir;

// Reference values from tests/oracle/lifshitz_oracle.py: polar-coordinate
// tanh-sinh quadrature at 30 digits.
namespace oracle {
constexpr double energy_plasma_221nm = -2.8651219932244715e-8;
constexpr double reduction_221nm = 0.71360161912682939;
constexpr double reduction_2um = 0.9583426680441926;
constexpr double reduction_10um = 0.99140899689501246;
constexpr double pressure_plasma_221nm = 0.35133443499990382;
constexpr double pressure_ideal_221nm = 0.54502481060992934;
}  // namespace oracle

namespace {
const MaterialKind gold = PlasmaModel(136e-9);
const MaterialKind ideal_metal = IdealMetal{};
constexpr double hbar_c = PhysicalConstants::hbar * PhysicalConstants::c;
}  // namespace

TEST_CASE("ideal-metal closed forms") {
  CHECK(ideal::energy_per_area(1e-6) == doctest::Approx(-4.3337525748e-10).epsilon(1e-10));
  CHECK(ideal::pressure(221e-9) == doctest::Approx(oracle::pressure_ideal_221nm).epsilon(1e-15));
  CHECK(ideal::pressure(1e-6) == doctest::Approx(1.300e-3).epsilon(1e-3));
  CHECK(ideal::curvature(221e-9) == doctest::Approx(-9.86e6).epsilon(1e-3));
  CHECK(ideal::tail_integral(1e-6) == doctest::Approx(-pi * pi * hbar_c / (1440.0 * 1e-12)).epsilon(1e-15));
}

TEST_CASE("ideal-metal quadrature matches the closed forms") {
  for (int i = 0; i < 20; ++i) {
    const double L = 100e-9 * std::pow(50.0, i / 19.0);
    CAPTURE(L);
    const auto e = energy_per_area(ideal_metal, L);
    const auto p = pressure(ideal_metal, L);
    CHECK(std::abs(e.value / ideal::energy_per_area(L) - 1.0) <= 1e-6);
    CHECK(std::abs(p.value / ideal::pressure(L) - 1.0) <= 1e-6);
    CHECK(e.value < 0.0);
    CHECK(p.value > 0.0);
    CHECK(e.est_error <= 1e-8 * std::abs(e.value) * 1.0000001);
  }
  const auto c = energy_derivative(ideal_metal, 221e-9, 2);
  CHECK(c.value == doctest::Approx(ideal::curvature(221e-9)).epsilon(1e-8));
  const auto d1 = energy_derivative(ideal_metal, 400e-9, 1);
  CHECK(d1.value == doctest::Approx(3.0 * pi * pi * hbar_c / (720.0 * std::pow(400e-9, 4))).epsilon(1e-8));
  const auto t = energy_tail_integral(ideal_metal, 300e-9);
  CHECK(t.value == doctest::Approx(ideal::tail_integral(300e-9)).epsilon(1e-8));

  const double ratio = energy_per_area(ideal_metal, 2e-6).value / energy_per_area(ideal_metal, 1e-6).value;
  CHECK(ratio == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("plasma-model values against the high-precision oracle") {
  const auto e = energy_per_area(gold, 221e-9);
  CHECK(e.value == doctest::Approx(oracle::energy_plasma_221nm).epsilon(1e-8));
  const auto p = pressure(gold, 221e-9);
  CHECK(p.value == doctest::Approx(oracle::pressure_plasma_221nm).epsilon(1e-8));
  CHECK(p.value < ideal::pressure(221e-9));

  const PlasmaModel model(136e-9);
  CHECK(reduction_factor(model, 221e-9) == doctest::Approx(oracle::reduction_221nm).epsilon(1e-8));
  CHECK(reduction_factor(model, 2e-6) == doctest::Approx(oracle::reduction_2um).epsilon(1e-8));
  const double r10 = reduction_factor(model, 10e-6);
  CHECK(r10 == doctest::Approx(oracle::reduction_10um).epsilon(1e-8));
  CHECK(r10 > 0.95);
  CHECK(r10 < 1.0);

  CHECK(reduction_factor(PlasmaModel(0.1e-9), 1e-6) >= 0.999);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  QuadratureSettings tight;
  tight.rel_tolerance = 1e-11;
  const double h = 0.5e-9;
  for (const MaterialKind* kind : {&gold, &ideal_metal}) {
    for (double L : {150e-9, 221e-9, 500e-9, 1e-6}) {
      CAPTURE(L);
      const double fd =
          (energy_per_area(*kind, L + h, tight).value - energy_per_area(*kind, L - h, tight).value) /
          (2.0 * h);
      CHECK(pressure(*kind, L).value == doctest::Approx(fd).epsilon(1e-4));
      CHECK(energy_derivative(*kind, L, 1).value == doctest::Approx(fd).epsilon(1e-4));

      const double fd2 = (pressure(*kind, L + h, tight).value - pressure(*kind, L - h, tight).value) / (2.0 * h);
      CHECK(energy_derivative(*kind, L, 2).value == doctest::Approx(fd2).epsilon(1e-4));
      CHECK(energy_derivative(*kind, L, 2).value < 0.0);

      const double fd_tail = (energy_tail_integral(*kind, L + h, tight).value -
                              energy_tail_integral(*kind, L - h, tight).value) / (2.0 * h);
      CHECK(-fd_tail == doctest::Approx(energy_per_area(*kind, L).value).epsilon(1e-4));
    }
  }
}

TEST_CASE("monotonicity in separation and plasma wavelength") {
  const PlasmaModel model(136e-9);
  double prev_e = INFINITY, prev_p = INFINITY, prev_r = 0.0;
  for (double L = 80e-9; L < 8e-6; L *= 1.6) {
    const double e = std::abs(energy_per_area(gold, L).value);
    const double p = pressure(gold, L).value;
    const double r = reduction_factor(model, L);
    CHECK(e < prev_e);
    CHECK(p < prev_p);
    CHECK(r > prev_r);
    CHECK(r < 1.0);
    prev_e = e;
    prev_p = p;
    prev_r = r;
  }
  double prev = 1.0;
  for (double lp = 10e-9; lp < 2e-6; lp *= 2.0) {
    const double r = reduction_factor(PlasmaModel(lp), 221e-9);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("tightening the tolerance stays within the reported error") {
  for (double L : {120e-9, 221e-9, 3e-6}) {
    QuadratureSettings loose;
    loose.rel_tolerance = 1e-5;
    for (int step = 0; step < 4; ++step) {
      const auto a = energy_per_area(gold, L, loose);
      const auto b = energy_per_area(gold, L, loose.tightened(0.5));
      CHECK(std::abs(a.value - b.value) <= a.est_error);
      const auto pa = pressure(gold, L, loose);
      const auto pb = pressure(gold, L, loose.tightened(0.5));
      CHECK(std::abs(pa.value - pb.value) <= pa.est_error);
      loose = loose.tightened(0.1);
    }
  }
}

TEST_CASE("serial and parallel quadrature agree bit for bit") {
  QuadratureSettings serial, parallel;
  serial.execution = Execution::serial;
  parallel.execution = Execution::parallel;
  const auto a = energy_per_area(gold, 300e-9, serial);
  const auto b = energy_per_area(gold, 300e-9, parallel);
  CHECK(a.value == b.value);
  CHECK(a.est_error == b.est_error);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("frequency integrand is continuous at zero frequency") {
  using lifshitz_detail::Quantity;
  for (Quantity q : {Quantity::energy, Quantity::pressure, Quantity::curvature, Quantity::tail}) {
    const double L = 221e-9;
    const double at_zero = lifshitz_detail::frequency_slice(gold, q, L, 0.0);
    const double near = lifshitz_detail::frequency_slice(gold, q, L, 1e-8);
    CHECK(std::isfinite(at_zero));
    CHECK(near == doctest::Approx(at_zero).epsilon(1e-7));
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(energy_per_area(gold, 0.0), DomainError);
  CHECK_THROWS_AS(pressure(gold, -1e-9), DomainError);
  CHECK_THROWS_AS(energy_derivative(gold, 1e-7, 3), DomainError);

  QuadratureSettings bad;
  bad.rel_tolerance = 1e-2;
  CHECK_THROWS_AS(energy_per_area(gold, 1e-7, bad), DomainError);
  bad.rel_tolerance = 1e-8;
  bad.max_subdivisions = 10;
  CHECK_THROWS_AS(energy_per_area(gold, 1e-7, bad), DomainError);

  // weak metal at short range: the small-omega regime needs many more intervals
  const MaterialKind dilute = PlasmaModel(1.0);
  QuadratureSettings starved;
  starved.rel_tolerance = 1e-16;
  starved.max_subdivisions = 50;
  const double reference = energy_per_area(dilute, 1e-6).value;
  try {
    (void)energy_per_area(dilute, 1e-6, starved);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.est_error() > 0.0);
    CHECK(std::abs(e.estimate() - reference) <= e.est_error() + 1e-8 * std::abs(reference));
  }
}

TEST_CASE("dilogarithm") {
  CHECK(dilog(0.0) == 0.0);
  CHECK(dilog(1.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-15));
  CHECK(dilog(0.5) == doctest::Approx(pi * pi / 12.0 - 0.5 * std::log(2.0) * std::log(2.0)).epsilon(1e-15));
  // Li2(x) + Li2(1 - x) = pi^2/6 - ln x ln(1 - x)
  for (double x = 0.01; x < 1.0; x += 0.0731)
    CHECK(dilog(x) + dilog(1.0 - x) ==
          doctest::Approx(pi * pi / 6.0 - std::log(x) * std::log(1.0 - x)).epsilon(1e-14));
  CHECK_THROWS_AS(dilog(1.5), DomainError);
}
