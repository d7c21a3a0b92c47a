#include <catch2/catch_amalgamated.hpp>

#include "fracmc/shapes.hpp"
#include "fracmc/side_partition.hpp"

using namespace fracmc;

TEST_CASE("flat segment factory") {
  const auto M = make_flat_segment(1.0, 0.0, 1);
  REQUIRE(M.facet_count() == 1);
  REQUIRE(dist(M.vertices.front(), {-1, 0}) < 1e-15);
  REQUIRE(dist(M.vertices.back(), {1, 0}) < 1e-15);
  REQUIRE_THROWS_AS(make_flat_segment(0.0, 0.0, 1), DegenerateFacetError);
}

TEST_CASE("cone C_0 boundary points") {
  const auto M = make_cone_2d(1.0);
  REQUIRE(M.boundary.size() == 4);
  std::vector<Vec2> expected = {{-1, 1}, {1, 1}, {1, -1}, {-1, -1}};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& ring : M.boundary)
      if (dist(M.vertices[ring[0]], e) < 1e-15) found = true;
    REQUIRE(found);
  }
}

TEST_CASE("cone C_d slopes") {
  const auto M = make_cone_2d(2.0);
  for (int f = 0; f < M.facet_count(); ++f) {
    const Vec2 a = M.facet_vertex(f, 0), b = M.facet_vertex(f, 1);
    const Vec2 d = b - a;
    REQUIRE(std::abs(std::abs(d[1] / d[0]) - 2.0) < 1e-12);
  }
}

TEST_CASE("cone normals point into the axis wedge") {
  for (double d : {0.5, 1.0, 2.0}) {
    for (const auto& pt : cone2d_regular_points(d, 3)) {
      const Vec2 probe = pt.z + 1e-6 * pt.nu;
      REQUIRE(std::abs(probe[1]) - d * std::abs(probe[0]) >
              std::abs(pt.z[1]) - d * std::abs(pt.z[0]));
    }
  }
}

TEST_CASE("3d cone mesh boundary rings at the two heights") {
  const auto M = make_cone_nd(24);
  REQUIRE(M.boundary.size() == 2);
  for (const auto& ring : M.boundary) {
    REQUIRE(ring.size() == 24);
    const double h = M.vertices[ring[0]][2];
    REQUIRE(std::abs(std::abs(h) - 1.0) < 1e-15);
    for (int idx : ring) {
      REQUIRE(M.vertices[idx][2] == h);
      REQUIRE(std::hypot(M.vertices[idx][0], M.vertices[idx][1]) ==
              Catch::Approx(1.0));
    }
  }
  REQUIRE_THROWS_AS(make_cone_nd(8), DegenerateFacetError);
}

TEST_CASE("3d cone normals point into the wedges") {
  const auto M = make_cone_nd(32);
  for (const auto& pt : cone3d_regular_points(M, 6)) {
    const Vec3 probe = pt.z + 1e-6 * pt.nu;
    REQUIRE(std::abs(probe[2]) - std::hypot(probe[0], probe[1]) >
            std::abs(pt.z[2]) - std::hypot(pt.z[0], pt.z[1]));
  }
}

TEST_CASE("barrier profile values") {
  Params params;
  params.N = 2;
  params.s = 0.5;
  BarrierSpec spec;
  spec.eps = 1e-3;
  spec.t = 1e-3;
  spec.beta = 0.25;

  const double delta = barrier_delta(spec.eps);
  REQUIRE(delta < 0.5);

  // w(0) = -eps by the choice delta = (-log eps)^{-1/2}.
  REQUIRE(barrier_profile(spec, params, {0.0}) ==
          Catch::Approx(-spec.eps).epsilon(1e-12));
  // zero at the well rim
  REQUIRE(barrier_profile(spec, params, {delta}) == 0.0);
  // bump plateau at the center reaches at least phi^beta
  const double phi = barrier_phi(spec.eps, params.N);
  REQUIRE(barrier_profile(spec, params, {0.75}) >=
          std::min(1.0, std::pow(phi, spec.beta)) - 1e-12);
  // no bump on the opposite side
  REQUIRE(barrier_profile(spec, params, {-0.75}) == 0.0);
}

TEST_CASE("barrier profile is numerically smooth at the stitching radii") {
  Params params;
  params.N = 2;
  BarrierSpec spec;
  spec.eps = 1e-3;
  spec.t = 1e-3;
  const BarrierProfileFn w(spec, params);
  const double delta = barrier_delta(spec.eps);
  const double h = 1e-4;
  for (double x0 : {delta, 0.625, 0.875}) {
    const double d_left = (w.scalar(x0) - w.scalar(x0 - h)) / h;
    const double d_right = (w.scalar(x0 + h) - w.scalar(x0)) / h;
    REQUIRE(std::abs(d_left - d_right) < 1e-6);
    const double dd_left =
        (w.scalar(x0) - 2 * w.scalar(x0 - h) + w.scalar(x0 - 2 * h)) / (h * h);
    const double dd_right =
        (w.scalar(x0 + 2 * h) - 2 * w.scalar(x0 + h) + w.scalar(x0)) / (h * h);
    REQUIRE(std::abs(dd_left - dd_right) < 1e-3);
  }
}

TEST_CASE("barrier constants") {
  Params params;
  params.N = 2;
  params.s = 0.5;
  BarrierSpec spec;
  spec.eps = std::exp(-16.0);
  spec.t = spec.eps;
  const auto c = barrier_constants(spec, params);
  REQUIRE(c.delta == Catch::Approx(0.25).epsilon(1e-12));
  REQUIRE(c.c_bound ==
          Catch::Approx(std::pow(2.0, 0.5) * 2.0 * M_PI / 0.25).epsilon(1e-12));
  REQUIRE(c.d_eps == Catch::Approx(2.0 * c.r_eps).epsilon(1e-15));
  REQUIRE(c.r_eps == Catch::Approx(1.0 / (2.0 * c.phi)).epsilon(1e-12));
}

TEST_CASE("phi decreases toward zero with eps") {
  Params params;
  params.N = 2;
  const double p1 = barrier_phi(1e-2, 2);
  const double p2 = barrier_phi(1e-4, 2);
  const double p3 = barrier_phi(1e-8, 2);
  REQUIRE(p1 > p2);
  REQUIRE(p2 > p3);
  REQUIRE(p3 > 0);
}

TEST_CASE("phi invertibility range and eps_d selection") {
  Params params;
  params.N = 2;
  params.s = 0.5;
  const PhiRange r = phi_invertibility_range(params);
  REQUIRE(r.eps_lo < r.eps_hi);
  REQUIRE(r.phi_lo < r.phi_hi);
  // A target separation reachable within J_phi inverts exactly.
  const double d = 1.0 / (2.0 * 0.5 * (r.phi_lo + r.phi_hi));
  const double eps_d = barrier_eps_for_separation(d, params);
  REQUIRE(barrier_phi(eps_d, 2) ==
          Catch::Approx(1.0 / (2.0 * d)).epsilon(1e-3));
  // Unreachable target: midpoint of J_phi.
  const double eps_far = barrier_eps_for_separation(1e9, params);
  REQUIRE(eps_far > r.eps_lo);
  REQUIRE(eps_far < r.eps_hi);
}

TEST_CASE("two-sheet barrier geometry") {
  Params params;
  params.N = 2;
  params.s = 0.5;
  BarrierSpec spec;
  spec.eps = 1e-3;
  spec.t = 1e-3;
  const auto c = barrier_constants(spec, params);
  const auto M = make_barrier_2d(spec, params);

  // Boundary rings at heights t and -d(eps)+t.
  REQUIRE(M.boundary.size() == 4);
  int at_top = 0, at_bottom = 0;
  for (const auto& ring : M.boundary) {
    const double y = M.vertices[ring[0]][1];
    if (std::abs(y - spec.t) < 1e-12) ++at_top;
    if (std::abs(y - (-c.d_eps + spec.t)) < 1e-12) ++at_bottom;
  }
  REQUIRE(at_top == 2);
  REQUIRE(at_bottom == 2);

  // The apex lies on the sheet.
  const Vec2 apex = barrier_apex_2d(spec);
  const auto [f, d] = M.nearest_facet(apex);
  REQUIRE(d < 1e-6);

  // Sheet normals point down.
  REQUIRE(M.facet_normals[f][1] < 0);

  // The lower sheet is exactly flat.
  int flat_facets = 0;
  for (int i = 0; i < M.facet_count(); ++i) {
    const Vec2 a = M.facet_vertex(i, 0), b = M.facet_vertex(i, 1);
    if (std::abs(a[1] - (-c.d_eps + spec.t)) < 1e-15 &&
        std::abs(b[1] - (-c.d_eps + spec.t)) < 1e-15)
      ++flat_facets;
  }
  REQUIRE(flat_facets == 2);
}

TEST_CASE("C_0 reflection symmetry swaps the side partition volumes") {
  // The diagonal reflection x -> (x2, x1) maps C_0 to itself, fixes z on the
  // diagonal-orthogonal branch, and exchanges interior and exterior.
  const auto M = make_cone_2d(1.0);
  const Vec2 z{-0.5, 0.5};
  const Vec2 nu = normalized(Vec2{1, 1});
  Box<2> region{{-3, -3}, {3, 3}};
  const auto vols = partition_volume<2>(M, z, nu, region, 400000, 99);
  const double total = region.volume();
  const double sigma = total * 0.5 / std::sqrt(400000.0);
  REQUIRE(std::abs(vols.vol_interior - vols.vol_exterior) < 4 * sigma + 0.01);
}
