#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/deviation.hpp"
#include "casimir/errors.hpp"
#include "doctest.h"

using namespace casimir;

namespace {

DeviationCurve parse(const std::string& text) {
  std::istringstream in(text);
  return read_deviation_csv(in, "inline");
}

double synthetic_rho(double kL) { return 1.0 - 0.3 * kL * kL / (1.0 + kL * kL); }

DeviationCurve synthetic_curve(double L, int n, double perturb = 0.0) {
  DeviationCurve c;
  c.label = "L=" + std::to_string(L);
  for (int i = 0; i < n; ++i) {
    const double kL = 0.05 * std::pow(60.0, double(i) / (n - 1));
    c.points.push_back({kL / L, L, synthetic_rho(kL) * (1.0 + perturb)});
  }
  return c;
}

}  // namespace

TEST_CASE("deviation csv parsing") {
  const auto c = parse("# comment\n\nk_rad_per_m,L_m,rho\n5235987.755982989,2e-7,0.84\n\n1e6,2e-7,0.9\n");
  REQUIRE(c.points.size() == 2);
  CHECK(c.points[0].k == 5235987.755982989);
  CHECK(c.points[0].L == 2e-7);
  CHECK(c.points[1].rho == 0.9);
  CHECK(c.label == "inline");

  auto message_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message_of("1e6,2e-7,0.9\n").find("line 1") != std::string::npos);
  CHECK(message_of("k_rad_per_m,L_m,rho\n1e6,2e-7\n").find("line 2") != std::string::npos);
  CHECK(message_of("k_rad_per_m,L_m,rho\n1e6,2e-7,0.9\n1e6,abc,0.9\n").find("line 3") != std::string::npos);
  CHECK(message_of("k_rad_per_m,L_m,rho\n") != "no error");
  CHECK_THROWS(parse("k_rad_per_m,L_m,rho\n1e6,2e-7,-0.9\n"));
  CHECK_THROWS(parse("k_rad_per_m,L_m,rho\n1e6,2e-7,0.9\n1e6,2e-7,0.8\n"));
  CHECK_THROWS_AS(read_deviation_csv(std::filesystem::path("/nonexistent/rho.csv")), ConfigError);
}

TEST_CASE("split by separation") {
  DeviationCurve all;
  for (auto& p : synthetic_curve(4e-7, 5).points) all.points.push_back(p);
  for (auto& p : synthetic_curve(1e-7, 7).points) all.points.push_back(p);
  const auto parts = split_by_separation(all);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].points.size() == 7);
  CHECK(parts[0].points[0].L == 1e-7);
  CHECK(parts[1].points.size() == 5);
}

TEST_CASE("monotone cubic") {
  const MonotoneCubic f({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 2.0});
  CHECK(f(1.0) == 1.0);
  CHECK(f(-5.0) == 0.0);
  CHECK(f(9.0) == 2.0);
  for (double x = 1.0; x <= 2.0; x += 0.01) CHECK(f(x) == doctest::Approx(1.0).epsilon(1e-15));
  double prev = -1.0;
  for (double x = 0.0; x <= 3.0; x += 0.001) {
    CHECK(f(x) >= prev - 1e-15);
    prev = f(x);
  }
  const MonotoneCubic two({0.0, 2.0}, {1.0, 3.0});
  CHECK(two(0.5) == doctest::Approx(1.5));
  const MonotoneCubic one({1.0}, {4.0});
  CHECK(one(0.0) == 4.0);
}

TEST_CASE("kL collapse") {
  std::vector<DeviationCurve> exact = {synthetic_curve(1e-7, 15), synthetic_curve(2e-7, 15),
                                       synthetic_curve(4e-7, 15)};
  CHECK(collapse_check(exact) <= 1e-10);

  auto perturbed = exact;
  perturbed[1] = synthetic_curve(2e-7, 15, 0.05);
  CHECK(collapse_check(perturbed) >= 0.04);

  SUBCASE("invariant under curve order and a common rescaling") {
    std::vector<DeviationCurve> shuffled = {perturbed[2], perturbed[0], perturbed[1]};
    CHECK(collapse_check(shuffled) == doctest::Approx(collapse_check(perturbed)).epsilon(1e-12));
    auto scaled = perturbed;
    for (auto& c : scaled)
      for (auto& p : c.points) p = rescale_point(p, 7.0);
    CHECK(collapse_check(scaled) == doctest::Approx(collapse_check(perturbed)).epsilon(1e-9));
  }

  SUBCASE("single-point pair from a rescaled example") {
    const DeviationPoint a{2.0 * pi / 1.2e-6, 2e-7, 0.84};
    const DeviationPoint b = rescale_point(a, 10.0);
    CHECK(collapse_check({DeviationCurve{{a}, "a"}, DeviationCurve{{b}, "b"}}) == 0.0);
  }

  CHECK_THROWS_AS(collapse_check({exact[0]}), DomainError);
  DeviationCurve far;
  far.points = {{1e10, 1e-7, 0.9}, {2e10, 1e-7, 0.8}};
  CHECK_THROWS_AS(collapse_check({exact[0], far}), DomainError);
}

TEST_CASE("rescaling and application") {
  const DeviationPoint p{2.0 * pi / 1.2e-6, 200e-9, 0.84};
  const DeviationPoint q = rescale_point(p, 10.0);
  // k/10 and 2 pi / 12e-6 differ by at most one ulp
  CHECK(q.k == doctest::Approx(2.0 * pi / 12e-6).epsilon(2.3e-16));
  CHECK(q.L == 2e-6);
  CHECK(q.rho == 0.84);
  CHECK(q.kL() == doctest::Approx(p.kL()).epsilon(1e-15));
  const DeviationPoint back = rescale_point(q, 0.1);
  CHECK(back.k == doctest::Approx(p.k).epsilon(1e-15));
  CHECK(back.L == doctest::Approx(p.L).epsilon(1e-15));

  CHECK(apply_deviation(0.84, 0.28e-12) == doctest::Approx(0.2352e-12).epsilon(1e-15));
  CHECK(apply_deviation(1.0, 0.33e-12) == 0.33e-12);

  const auto curve = synthetic_curve(1e-7, 20);
  CHECK(deviation_at(curve, 0.5) == doctest::Approx(synthetic_rho(0.5)).epsilon(1e-3));
  CHECK_THROWS_AS(deviation_at(curve, 1e3), DomainError);
}

TEST_CASE("validity diagnostics") {
  const CorrugatedGeometry g{221e-9, 1.2e-6, 59e-9, 8e-9, std::nullopt};
  const auto report = validity_diagnostics(g, PlasmaModel(136e-9));
  CHECK(report.ratio_a1_L == doctest::Approx(0.267).epsilon(1e-3));
  CHECK(report.ratio_a1_lp == doctest::Approx(0.434).epsilon(1e-3));
  CHECK(report.ratio_a2_L == doctest::Approx(0.0362).epsilon(1e-2));
  CHECK(report.ratio_L_lc == doctest::Approx(0.184).epsilon(1e-2));

  const auto flags = report.flags();
  auto find = [&](const std::string& name) {
    auto it = std::find_if(flags.begin(), flags.end(), [&](const auto& f) { return f.name == name; });
    REQUIRE(it != flags.end());
    return *it;
  };
  CHECK(find("a1/L").warn);
  CHECK(find("a1/lambda_p").warn);
  CHECK_FALSE(find("a2/L").warn);
  CHECK_FALSE(find("a2/lambda_p").warn);
  CHECK_FALSE(find("L/lambda_c").warn);

  const auto strict = validity_diagnostics(g, PlasmaModel(136e-9), 0.01);
  CHECK(strict.ratio_a1_L == report.ratio_a1_L);
  bool a2_flagged = false;
  for (const auto& f : strict.flags())
    if (f.name == "a2/L") a2_flagged = f.warn;
  CHECK(a2_flagged);
}
