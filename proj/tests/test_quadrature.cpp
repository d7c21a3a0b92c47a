#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracmc/estimate.hpp"
#include "fracmc/quadrature.hpp"

using namespace fracmc;

TEST_CASE("adaptive quadrature reproduces closed forms") {
  const auto r1 = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                     M_PI);
  REQUIRE(r1.value == Catch::Approx(2.0).epsilon(1e-12));

  const auto r2 = integrate_adaptive(
      [](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0);
  REQUIRE(r2.value == Catch::Approx(M_PI / 4.0).epsilon(1e-12));

  // mild endpoint steepness
  const auto r3 = integrate_adaptive(
      [](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-14, 1e-12);
  REQUIRE(r3.value == Catch::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("piecewise integration splits at kinks") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const auto r = integrate_piecewise(f, 0.0, 1.0, {0.3});
  const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
  REQUIRE(r.value == Catch::Approx(exact).epsilon(1e-12));
}
