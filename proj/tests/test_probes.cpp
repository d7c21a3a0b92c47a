#include <catch2/catch_amalgamated.hpp>

#include "fracmc/probes.hpp"
#include "fracmc/shapes.hpp"

using namespace fracmc;

namespace {
Params params2() {
  Params p;
  p.N = 2;
  p.s = 0.5;
  return p;
}
}  // namespace

TEST_CASE("hyperplane probe on the flat segment") {
  const auto M = make_flat_segment(1.0, 0.0, 6);
  QuadratureSpec spec;
  spec.n_samples = 30000;
  spec.seed = 1;
  const auto rep = slide_hyperplane<2>(M, {0, 1}, +1, params2(), spec);
  REQUIRE(rep.lambda_star == 0.0);
  // Every vertex lies on the contact plane.
  REQUIRE(rep.contact_points.size() == M.vertices.size());
  REQUIRE_FALSE(rep.fmc_at_contact.empty());
  REQUIRE(rep.verdict == ProbeVerdict::ConsistentWithCritical);
}

TEST_CASE("hyperplane probe on the cone touches only boundary corners") {
  const auto M = make_cone_2d(1.0);
  QuadratureSpec spec;
  spec.n_samples = 30000;
  spec.seed = 2;
  const auto rep = slide_hyperplane<2>(M, {0, 1}, +1, params2(), spec);
  REQUIRE(rep.lambda_star == -1.0);
  REQUIRE(rep.contact_points.size() == 2);  // the Gamma_2 corners
  REQUIRE(rep.fmc_at_contact.empty());
  REQUIRE(rep.verdict == ProbeVerdict::NoContact);
}

TEST_CASE("dented sheet violates criticality at the dent") {
  // Flat sheet with a smooth downward bump in the middle.
  auto u = [](double x) {
    return std::abs(x) < 0.5
               ? -0.2 * std::exp(-0.25 / (0.25 - x * x)) * std::exp(1.0)
               : 0.0;
  };
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-1.0 + 2.0 * i / 400);
  const auto M = make_graph_sheet_2d(u, -1.0, 1.0, 0.0, grid, 400);
  QuadratureSpec spec;
  spec.n_samples = 200000;
  spec.seed = 3;
  const auto rep = slide_hyperplane<2>(M, {0, 1}, +1, params2(), spec);
  REQUIRE(rep.lambda_star == Catch::Approx(-0.2).epsilon(1e-3));
  REQUIRE_FALSE(rep.fmc_at_contact.empty());
  REQUIRE(rep.verdict == ProbeVerdict::ViolatesCriticality);
}

TEST_CASE("ball slides through a wide-enough gap") {
  // Two flat sheets at heights 0 and -10; ball of radius sqrt(10)/2 along
  // the mid-line passes between them.
  std::vector<std::vector<Vec2>> chains = {
      {{1, 0}, {-1, 0}}, {{1, -10}, {-1, -10}}};
  const auto M = build_polyline_multi(chains, {false, false});
  QuadratureSpec spec;
  spec.n_samples = 20000;
  spec.seed = 4;
  const double radius = 0.5 * std::sqrt(10.0);
  const auto rep = slide_ball<2>(M, radius, -5.0, {1, 0}, params2(), spec);
  REQUIRE(rep.verdict == ProbeVerdict::NoContact);
}

TEST_CASE("ball contacts a neck crossing the gap") {
  // A vertical chord spanning the gap: the ball must hit it.
  std::vector<std::vector<Vec2>> chains = {
      {{1, 0}, {-1, 0}},
      {{1, -10}, {-1, -10}},
      {{0, -0.05}, {0, -9.95}}};
  // shift the neck a hair to avoid touching the sheets
  chains[2][0][0] = 0.001;
  chains[2][1][0] = 0.001;
  const auto M = build_polyline_multi(chains, {false, false});
  QuadratureSpec spec;
  spec.n_samples = 150000;
  spec.seed = 5;
  const double radius = 0.5 * std::sqrt(10.0);
  const auto rep = slide_ball<2>(M, radius, -5.0, {1, 0}, params2(), spec);
  REQUIRE(rep.verdict != ProbeVerdict::NoContact);
  REQUIRE(rep.contact_points.size() == 1);
  REQUIRE(std::abs(rep.contact_points[0][0] - 0.001) < 1e-6);
  REQUIRE_FALSE(rep.fmc_at_contact.empty());
}

TEST_CASE("zero-radius ball is rejected") {
  const auto M = make_flat_segment(1.0, 0.0, 2);
  QuadratureSpec spec;
  REQUIRE_THROWS_AS(slide_ball<2>(M, 0.0, 0.0, {1, 0}, params2(), spec),
                    ConfigError);
}

TEST_CASE("probe verdicts are orientation independent") {
  const auto M = make_flat_segment(1.0, 0.0, 6);
  QuadratureSpec spec;
  spec.n_samples = 30000;
  spec.seed = 6;
  const auto below = slide_hyperplane<2>(M, {0, 1}, +1, params2(), spec);
  const auto above = slide_hyperplane<2>(M, {0, 1}, -1, params2(), spec);
  REQUIRE(below.verdict == above.verdict);
}
