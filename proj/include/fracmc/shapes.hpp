#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "fracmc/estimate.hpp"
#include "fracmc/hypersurface.hpp"

namespace fracmc {

// Factories for the analytic test geometries: flat disks (the critical
// shape), symmetric and tilted cones, and the two-sheet bump barriers.
//
// Orientation conventions baked into the constructors:
//   - flat disks: normals point to +e_N;
//   - cones: normals point into the axis wedge {|x_N| > slope*|x'|};
//   - barriers and graph sheets: normals point to -e_N (downward), which is
//     the orientation under which the barrier's curvature at the well comes
//     out negative.

// --------------------------------------------------------------------------
// Flat disk

inline Hypersurface<2> make_flat_segment(double radius, double height,
                                         int n_facets = 1) {
  if (!(radius > 0)) throw DegenerateFacetError("flat disk needs radius > 0");
  std::vector<Vec2> pts;
  const int n = std::max(1, n_facets);
  for (int i = 0; i <= n; ++i) {
    const double x = -radius + 2.0 * radius * i / n;
    pts.push_back({x, height});
  }
  return build_polyline(pts, false);
}

inline Hypersurface<3> make_flat_disk_3d(double radius, double height,
                                         int n_facets = 64) {
  if (!(radius > 0)) throw DegenerateFacetError("flat disk needs radius > 0");
  const int n = std::max(3, n_facets);
  std::vector<Vec3> vertices;
  vertices.push_back({0, 0, height});
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    vertices.push_back({radius * std::cos(a), radius * std::sin(a), height});
  }
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i)
    tris.push_back({0, 1 + i, 1 + (i + 1) % n});  // CCW from above: normal +e3
  return build_trimesh(vertices, tris);
}

// --------------------------------------------------------------------------
// Cones

struct ConeSpec {
  int N = 2;
  double d = 1.0;       // 2D slope/height parameter
  int n_azimuthal = 64; // 3D resolution
};

// Four-segment X cone C_d through (+-1, d) and (+-1, -d), vertex at the
// origin.  Normals point into the wedges {|x2| > d|x1|}.
inline Hypersurface<2> make_cone_2d(double d) {
  if (!(d > 0)) throw DegenerateFacetError("cone slope must be positive");
  const std::vector<std::vector<Vec2>> chains = {
      {{-1, d}, {0, 0}, {1, d}},   // upper V, left-hand normals point up
      {{1, -d}, {0, 0}, {-1, -d}}  // lower V, normals point down
  };
  return build_polyline_multi(chains, {false, false});
}

// Triangulated double cone |x_N| = |x'| truncated at |x_N| = 1, apex at the
// origin.  Normals point into the wedges {|x3| > |x'|}.
inline Hypersurface<3> make_cone_nd(int n_azimuthal) {
  if (n_azimuthal < 16)
    throw DegenerateFacetError("cone needs n_azimuthal >= 16");
  std::vector<Vec3> vertices;
  vertices.push_back({0, 0, 0});  // apex
  const int n = n_azimuthal;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    vertices.push_back({std::cos(a), std::sin(a), 1.0});
  }
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    vertices.push_back({std::cos(a), std::sin(a), -1.0});
  }
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i) {
    const int a = 1 + i, b = 1 + (i + 1) % n;
    tris.push_back({0, a, b});  // upper sheet, normal up-inward
  }
  for (int i = 0; i < n; ++i) {
    const int a = 1 + n + i, b = 1 + n + (i + 1) % n;
    tris.push_back({0, b, a});  // lower sheet, normal down-inward
  }
  return build_trimesh(vertices, tris);
}

// On-surface evaluation points on the 2D cone, away from the apex and the
// boundary (curvature is undefined at the vertex and near the rings).
struct ConePoint2D {
  Vec2 z;
  Vec2 nu;
};

inline std::vector<ConePoint2D> cone2d_regular_points(double d, int per_branch,
                                                      double exclusion = 0.1) {
  std::vector<ConePoint2D> out;
  const double len = std::sqrt(1.0 + d * d);
  // Branch parametrization from the apex outward; t in (0,1].
  const Vec2 dirs[4] = {{-1, d}, {1, d}, {-1, -d}, {1, -d}};
  for (const Vec2& dir : dirs) {
    const Vec2 unit = (1.0 / len) * dir;
    Vec2 nu = rot90(unit);
    // Point the normal into the axis wedge: at branch midpoint m, m + eps*nu
    // must satisfy |x2| > d|x1| more strongly than m does.
    const Vec2 m = 0.5 * dir;
    if (std::abs(m[1] + 1e-3 * nu[1]) - d * std::abs(m[0] + 1e-3 * nu[0]) <
        std::abs(m[1]) - d * std::abs(m[0]))
      nu = -1.0 * nu;
    for (int k = 0; k < per_branch; ++k) {
      const double t =
          exclusion + (1.0 - 2.0 * exclusion) * (k + 0.5) / per_branch;
      out.push_back({t * dir, nu});
    }
  }
  return out;
}

// Facet barycenters on the 3D cone at mid-slant height (exactly on the mesh,
// away from apex and rings).
struct ConePoint3D {
  Vec3 z;
  Vec3 nu;
};

inline std::vector<ConePoint3D> cone3d_regular_points(
    const Hypersurface<3>& cone, int count) {
  std::vector<ConePoint3D> out;
  const int step = std::max(1, cone.facet_count() / (2 * count));
  for (int f = 0; f < cone.facet_count() && static_cast<int>(out.size()) < count;
       f += step) {
    const Vec3 c = cone.facet_barycenter(f);
    if (c[2] > 0.2)  // upper sheet, clear of apex
      out.push_back({c, cone.facet_normals[f]});
  }
  return out;
}

// --------------------------------------------------------------------------
// Barrier (bump well + optional side bump + flat lower sheet)

struct BarrierSpec {
  double eps = 1e-3;        // well depth; requires delta(eps) < 1/2
  double t = 1e-3;          // sliding offset, 0 < t <= eps
  double d_sep = 0.0;       // ring separation; 0 -> use d(eps) = 2 r(eps)
  double beta = 0.25;       // bump height exponent, in (0, s)
  double bump_center_b = 0.75;  // |b'| = 3/4
  bool with_bump = true;

  void validate() const {
    if (!(eps > 0) || !(eps < std::exp(-4.0)))
      throw ConfigError("barrier eps must lie in (0, e^-4) so delta < 1/2");
    if (!(t > 0) || !(t <= eps))
      throw ConfigError("barrier t must lie in (0, eps]");
    if (!(beta > 0) || !(beta < 1)) throw ConfigError("beta must be in (0,1)");
    if (std::abs(std::abs(bump_center_b) - 0.75) > 1e-12)
      throw ConfigError("|bump center| must equal 3/4");
  }
};

inline double barrier_delta(double eps) {
  return 1.0 / std::sqrt(-std::log(eps));
}

// The well profile w_eps and its radial derivatives, as functions of
// rho = |x'|.
struct WellProfile {
  double delta;

  double value(double rho) const {
    const double g = delta * delta - rho * rho;
    if (g <= 0) return 0.0;
    return -std::exp(-1.0 / g);
  }
  double d1(double rho) const {
    const double g = delta * delta - rho * rho;
    if (g <= 0) return 0.0;
    return 2.0 * rho / (g * g) * std::exp(-1.0 / g);
  }
  double d2(double rho) const {
    const double g = delta * delta - rho * rho;
    if (g <= 0) return 0.0;
    const double e = std::exp(-1.0 / g);
    return e * (2.0 / (g * g) + 8.0 * rho * rho / (g * g * g) -
                4.0 * rho * rho / (g * g * g * g));
  }
};

// Sup norm of the Hessian of w_eps over R^{N-1}: the radial second
// derivative and, for N = 3, the tangential eigenvalue w'(rho)/rho.
inline double barrier_phi(double eps, int N) {
  const WellProfile w{barrier_delta(eps)};
  double sup = 0.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double rho = w.delta * i / (n + 1.0);
    double h = std::abs(w.d2(rho));
    if (N == 3 && rho > 0) h = std::max(h, std::abs(w.d1(rho) / rho));
    if (N == 3 && rho == 0) h = std::max(h, std::abs(w.d2(0.0)));
    sup = std::max(sup, h);
  }
  return sup;
}

struct BarrierConstants {
  double delta = 0;
  double phi = 0;
  double r_eps = 0;
  double d_eps = 0;
  double c_bound = 0;
};

inline BarrierConstants barrier_constants(const BarrierSpec& spec,
                                          const Params& params) {
  spec.validate();
  BarrierConstants c;
  c.delta = barrier_delta(spec.eps);
  c.phi = barrier_phi(spec.eps, params.N);
  c.r_eps = 1.0 / (2.0 * (params.N - 1) * c.phi);
  c.d_eps = 2.0 * c.r_eps;
  c.c_bound = std::pow(2.0 * (params.N - 1), params.s) *
              unit_sphere_measure(params.N) / (params.s * (1.0 - params.s));
  return c;
}

namespace detail {

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
  auto f = [](double v) { return v > 0 ? std::exp(-1.0 / v) : 0.0; };
  const double a = f(x), b = f(1.0 - x);
  return a / (a + b);
}

}  // namespace detail

// Evaluator for the stitched profile w~_eps with the expensive constants
// (phi, bump height) computed once: well inside |x'| < delta, zero up to
// 5/8, the radially symmetric side bump v_eps translated to |b'| = 3/4
// (plateau of height min(1, phi^beta) on rho <= 1/16, support rho < 1/8),
// zero beyond 7/8.
struct BarrierProfileFn {
  BarrierSpec spec;
  double delta = 0;
  double bump_height = 0;

  BarrierProfileFn(const BarrierSpec& s, const Params& params) : spec(s) {
    spec.validate();
    delta = barrier_delta(spec.eps);
    bump_height =
        std::min(1.0, std::pow(barrier_phi(spec.eps, params.N), spec.beta));
  }

  double well(double rho) const { return WellProfile{delta}.value(rho); }

  double side_bump(double rho) const {
    if (!spec.with_bump || rho >= 0.125) return 0.0;
    if (rho <= 0.0625) return bump_height;
    return bump_height * detail::smooth_step((0.125 - rho) / 0.0625);
  }

  double operator()(const std::vector<double>& x_prime) const {
    double r2 = 0;
    for (double c : x_prime) r2 += c * c;
    const double rho = std::sqrt(r2);
    if (rho < delta) return well(rho);
    if (rho < 0.625 || rho >= 0.875) return 0.0;
    double d2 =
        (x_prime[0] - spec.bump_center_b) * (x_prime[0] - spec.bump_center_b);
    for (size_t i = 1; i < x_prime.size(); ++i)
      d2 += x_prime[i] * x_prime[i];
    return side_bump(std::sqrt(d2));
  }

  double scalar(double x) const { return (*this)(std::vector<double>{x}); }
};

inline double barrier_profile(const BarrierSpec& spec, const Params& params,
                              const std::vector<double>& x_prime) {
  return BarrierProfileFn(spec, params)(x_prime);
}

// --------------------------------------------------------------------------
// Graph sheets and barrier surfaces

// Polyline graph of u over [x_lo, x_hi] at the given height offset, normals
// pointing down (-e2): the chain runs right to left.
inline Hypersurface<2> make_graph_sheet_2d(
    const std::function<double(double)>& u, double x_lo, double x_hi,
    double height, const std::vector<double>& refine_points, int n_base) {
  std::vector<double> xs;
  for (int i = 0; i <= n_base; ++i)
    xs.push_back(x_lo + (x_hi - x_lo) * i / n_base);
  xs.insert(xs.end(), refine_points.begin(), refine_points.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           xs.end());
  std::vector<Vec2> pts;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    pts.push_back({*it, u(*it) + height});
  return build_polyline(pts, false);
}

inline std::vector<double> barrier_sample_grid(const BarrierSpec& spec,
                                               int n_well = 160,
                                               int n_bump = 120) {
  const double delta = barrier_delta(spec.eps);
  std::vector<double> xs;
  for (int i = 0; i <= n_well; ++i)
    xs.push_back(-delta + 2.0 * delta * i / n_well);
  const double b = spec.bump_center_b;
  for (int i = 0; i <= n_bump; ++i)
    xs.push_back(b - 0.125 + 0.25 * i / n_bump);
  xs.push_back(-0.875);
  xs.push_back(-0.625);
  xs.push_back(0.625);
  xs.push_back(0.875);
  return xs;
}

// Two-sheet barrier in the plane: the graph sheet of the (optionally
// bump-decorated) profile at height t over |x'| <= 1, plus the flat sheet at
// -d + t.  Sheet normals point down.  Boundary rings are the four endpoints
// at heights t and -d + t.
inline Hypersurface<2> make_barrier_2d(const BarrierSpec& spec,
                                       const Params& params,
                                       int n_base = 200) {
  spec.validate();
  const BarrierConstants c = barrier_constants(spec, params);
  const double d = spec.d_sep > 0 ? spec.d_sep : c.d_eps;
  const BarrierProfileFn top(spec, params);

  std::vector<double> xs;
  for (int i = 0; i <= n_base; ++i) xs.push_back(-1.0 + 2.0 * i / n_base);
  for (double x : barrier_sample_grid(spec)) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           xs.end());

  std::vector<Vec2> sheet1;  // right to left: normals point down
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    sheet1.push_back({*it, top.scalar(*it) + spec.t});

  std::vector<std::vector<Vec2>> chains;
  chains.push_back(sheet1);
  chains.push_back(
      {{1.0, -d + spec.t}, {0.0, -d + spec.t}, {-1.0, -d + spec.t}});
  return build_polyline_multi(chains, {false, false});
}

// The barrier apex: lowest point of the well sheet.
inline Vec2 barrier_apex_2d(const BarrierSpec& spec) {
  return Vec2{0.0, -spec.eps + spec.t};
}

// --------------------------------------------------------------------------
// phi invertibility: the empirical interval on which phi is strictly
// increasing in eps, and the inverse used to pick eps for a target
// separation d.

struct PhiRange {
  double eps_lo = 0, eps_hi = 0;
  double phi_lo = 0, phi_hi = 0;
};

inline PhiRange phi_invertibility_range(const Params& params,
                                        double eps_min = 1e-12) {
  // phi is increasing from eps_min up to some eps below the delta < 1/2
  // cutoff; scan a log grid and keep the maximal increasing prefix.
  const double eps_max = std::exp(-4.0) * (1.0 - 1e-9);
  const int n = 200;
  PhiRange out;
  double prev_eps = eps_min, prev_phi = barrier_phi(eps_min, params.N);
  out.eps_lo = prev_eps;
  out.phi_lo = prev_phi;
  out.eps_hi = prev_eps;
  out.phi_hi = prev_phi;
  for (int i = 1; i <= n; ++i) {
    const double e =
        std::exp(std::log(eps_min) +
                 (std::log(eps_max) - std::log(eps_min)) * i / n);
    const double p = barrier_phi(e, params.N);
    if (p <= prev_phi) break;
    out.eps_hi = e;
    out.phi_hi = p;
    prev_phi = p;
    prev_eps = e;
  }
  return out;
}

// eps_d of the construction: phi^{-1}((2(N-1)d)^{-1}) when that value lies in
// the invertibility range, otherwise the midpoint of the range (the target
// is then unreachable and any eps in J_phi works).
inline double barrier_eps_for_separation(double d, const Params& params) {
  const PhiRange range = phi_invertibility_range(params);
  const double target = 1.0 / (2.0 * (params.N - 1) * d);
  if (target < range.phi_lo || target > range.phi_hi) {
    return std::exp(0.5 * (std::log(range.eps_lo) + std::log(range.eps_hi)));
  }
  double lo = range.eps_lo, hi = range.eps_hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::exp(0.5 * (std::log(lo) + std::log(hi)));
    if (barrier_phi(mid, params.N) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (std::log(lo) + std::log(hi)));
}

}  // namespace fracmc
