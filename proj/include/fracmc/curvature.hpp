#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fracmc/errors.hpp"
#include "fracmc/estimate.hpp"
#include "fracmc/hypersurface.hpp"
#include "fracmc/parallel.hpp"
#include "fracmc/quadrature.hpp"
#include "fracmc/rng.hpp"
#include "fracmc/side_partition.hpp"

namespace fracmc {

// Numerical evaluation of the fractional mean curvature
//
//   H(z) = c_N * pv-int (chi_Ai(z) - chi_Ae(z)) |y - z|^{-(N+s)} dy
//
// at an interior C^{1,alpha} point z of an oriented hypersurface.  The Monte
// Carlo route samples the annulus r_near < |y-z| < R_far with radial density
// proportional to r^{-1-s} (the kernel's radial profile), in antithetic
// pairs mirrored across the tangent plane at z so the flat leading part of
// the principal value cancels exactly.  The deterministic route (fmc_graph)
// integrates the odd-F graph formula over a vertical cylinder.

struct QuadratureSpec {
  double r_near = 0;             // <= 0: 1e-3 * diam(M)
  double R_far = 0;              // <= 0: 1e3 * diam(M)
  int64_t n_samples = 1000000;   // antithetic pairs
  uint64_t seed = 0;
  double alpha_reg = 1.0;        // assumed Holder exponent, in (s, 1]

  void resolve(double diam) {
    if (r_near <= 0) r_near = 1e-3 * diam;
    if (R_far <= 0) R_far = 1e3 * diam;
  }
};

// Orthonormal sampling frame anchored at the tangent plane.  The normal is
// canonicalized (sign-fixed), so frames built from nu and -nu coincide and
// an orientation flip reuses the identical sample set.
template <int N>
struct SamplingFrame {
  std::array<Vec<N>, N - 1> tangent{};
  Vec<N> normal{};
};

template <int N>
inline SamplingFrame<N> make_frame(const Vec<N>& nu) {
  Vec<N> m = nu;
  int k = 0;
  for (int i = 1; i < N; ++i)
    if (std::abs(m[i]) > std::abs(m[k])) k = i;
  if (m[k] < 0) m = -1.0 * m;
  SamplingFrame<N> fr;
  fr.normal = m;
  if constexpr (N == 2) {
    fr.tangent[0] = rot90(m);
  } else {
    int j = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(m[i]) < std::abs(m[j])) j = i;
    Vec3 axis{0, 0, 0};
    axis[j] = 1.0;
    fr.tangent[0] = normalized(cross3(axis, m));
    fr.tangent[1] = cross3(m, fr.tangent[0]);
  }
  return fr;
}

namespace detail {

template <int N>
inline Vec<N> frame_direction(const SamplingFrame<N>& fr, SampleStream& rng,
                              double& normal_component) {
  if constexpr (N == 2) {
    const double phi = 2.0 * M_PI * rng.next_double();
    const double c = std::cos(phi), s = std::sin(phi);
    normal_component = s;
    return c * fr.tangent[0] + s * fr.normal;
  } else {
    const double zc = 2.0 * rng.next_double() - 1.0;
    const double phi = 2.0 * M_PI * rng.next_double();
    const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    normal_component = zc;
    return (rho * std::cos(phi)) * fr.tangent[0] +
           (rho * std::sin(phi)) * fr.tangent[1] + zc * fr.normal;
  }
}

// Mirror of the direction across the tangent plane: flip the normal part.
template <int N>
inline Vec<N> mirror_direction(const SamplingFrame<N>& fr, const Vec<N>& d,
                               double normal_component) {
  return d - (2.0 * normal_component) * fr.normal;
}

}  // namespace detail

// Empirical Holder coefficient of the surface over its tangent plane at z:
// probes heights u(x') along the normal at a few tangential offsets and
// returns K with |u| <= K |x'|^{1+alpha} over the fit window.  Feeds the
// deterministic near-field truncation bound.
template <int N>
inline double local_holder_coefficient(const Hypersurface<N>& M,
                                       const Vec<N>& z,
                                       const SamplingFrame<N>& frame,
                                       double alpha, double fit_radius) {
  double K = 0.0;
  const double h = fit_radius;
  const int n_dirs = (N == 2) ? 2 : 8;
  for (int dir = 0; dir < n_dirs; ++dir) {
    Vec<N> t;
    if constexpr (N == 2) {
      t = (dir == 0 ? 1.0 : -1.0) * frame.tangent[0];
    } else {
      const double a = 2.0 * M_PI * dir / n_dirs;
      t = std::cos(a) * frame.tangent[0] + std::sin(a) * frame.tangent[1];
    }
    for (double frac : {0.3, 0.55, 0.8, 1.0}) {
      const double rho = frac * fit_radius;
      const Vec<N> base = z + rho * t;
      const Vec<N> a = base + h * frame.normal;
      const Vec<N> b = base - h * frame.normal;
      const auto hits = M.hit_params(a, b);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [tp, f] : hits) {
        const double height = h * (1.0 - 2.0 * tp);
        if (std::abs(height) < std::abs(best)) best = height;
      }
      if (std::isfinite(best))
        K = std::max(K, std::abs(best) / std::pow(rho, 1.0 + alpha));
    }
  }
  return K;
}

// Monte Carlo estimate of H_{M,s}(z) for the orientation nu.  Deterministic
// for fixed (inputs, seed, n_samples) independent of thread count: samples
// are keyed by index, partial sums are integers reduced in block order.
template <int N>
inline Estimate fmc_estimate(
    const Hypersurface<N>& M, const Vec<N>& z, const Vec<N>& nu,
    const Params& params, QuadratureSpec spec,
    const std::optional<SamplingFrame<N>>& frame_override = {}) {
  if (!params.valid()) throw ConfigError("invalid Params");
  spec.resolve(M.diameter);
  if (!(spec.r_near > 0) || !(spec.r_near < spec.R_far))
    throw ConfigError("need 0 < r_near < R_far");
  if (!(spec.alpha_reg > params.s) || !(spec.alpha_reg <= 1.0))
    throw ConfigError("alpha_reg must lie in (s, 1]");
  const double tol = M.default_tol();
  const auto [facet, dist_z] = M.nearest_facet(z);
  if (facet < 0 || dist_z > 10 * tol)
    throw PointNotOnSurfaceError("z is not on the surface");
  if (std::abs(dot(nu, M.facet_normals[facet])) < 1.0 - 1e-6)
    throw PointNotOnSurfaceError("nu does not match the facet normal at z");
  if (M.boundary_distance(z) < spec.r_near)
    throw BoundaryPointError("z lies within r_near of the boundary");

  const SamplingFrame<N> frame =
      frame_override ? *frame_override : make_frame<N>(nu);
  const double s = params.s;
  const double A = std::pow(spec.r_near, -s);
  const double B = std::pow(spec.R_far, -s);
  const double Iw = unit_sphere_measure(N) * (A - B) / s;

  const int64_t n_pairs = spec.n_samples;
  const int64_t block = 1 << 14;
  const int64_t n_blocks = (n_pairs + block - 1) / block;

  struct Accum {
    int64_t sum = 0;
    int64_t sumsq = 0;
    int64_t indet = 0;
    int64_t evals = 0;
    bool exhausted = false;
  };
  std::vector<Accum> partial(static_cast<size_t>(n_blocks));
  std::atomic<bool> abort{false};

  parallel_for(n_blocks, [&](int64_t bi) {
    if (abort.load(std::memory_order_relaxed)) return;
    Accum acc;
    const int64_t lo = bi * block;
    const int64_t hi = std::min(n_pairs, lo + block);
    for (int64_t i = lo; i < hi; ++i) {
      SampleStream rng(spec.seed, static_cast<uint64_t>(i));
      bool done = false;
      for (int attempt = 0; attempt < 100 && !done; ++attempt) {
        const double u = rng.next_double();
        const double r = std::pow(A - u * (A - B), -1.0 / s);
        double nc = 0;
        const Vec<N> d = detail::frame_direction<N>(frame, rng, nc);
        const Vec<N> d2 = detail::mirror_direction<N>(frame, d, nc);
        const Vec<N> y1 = z + r * d;
        const Vec<N> y2 = z + r * d2;
        const SideLabel l1 = classify_with_facet<N>(M, facet, z, nu, y1, tol);
        acc.evals += 1;
        if (l1 == SideLabel::Indeterminate) {
          acc.indet += 1;
          continue;
        }
        const SideLabel l2 = classify_with_facet<N>(M, facet, z, nu, y2, tol);
        acc.evals += 1;
        if (l2 == SideLabel::Indeterminate) {
          acc.indet += 1;
          continue;
        }
        const int g1 = (l1 == SideLabel::Interior) ? 1 : -1;
        const int g2 = (l2 == SideLabel::Interior) ? 1 : -1;
        acc.sum += g1 + g2;
        acc.sumsq += (g1 + g2) != 0;
        done = true;
      }
      if (!done) {
        acc.exhausted = true;
        abort.store(true, std::memory_order_relaxed);
        break;
      }
    }
    partial[static_cast<size_t>(bi)] = acc;
  });

  int64_t sum = 0, sumsq = 0, indet = 0, evals = 0;
  bool exhausted = false;
  for (const Accum& a : partial) {
    sum += a.sum;
    sumsq += a.sumsq;
    indet += a.indet;
    evals += a.evals;
    exhausted |= a.exhausted;
  }
  if (exhausted)
    throw NonConvergentError("a sample exhausted its 100-redraw budget");
  if (static_cast<double>(indet) > 1e-2 * static_cast<double>(evals))
    throw NonConvergentError("indeterminate classification rate above 1e-2");

  const double n = static_cast<double>(n_pairs);
  const double mean = static_cast<double>(sum) / (2.0 * n);
  const double ex2 = static_cast<double>(sumsq) / n;
  const double var = std::max(0.0, ex2 - mean * mean) * (n / std::max(1.0, n - 1));

  Estimate est;
  est.value = params.cN * Iw * mean;
  est.std_error = params.cN * Iw * std::sqrt(var / n);
  est.seed = spec.seed;
  est.n_eval = evals;

  const double trunc_far =
      params.cN * unit_sphere_measure(N) * std::pow(spec.R_far, -s) / s;
  const double fit_radius = std::min(0.05 * M.diameter, 100.0 * spec.r_near);
  const double K = local_holder_coefficient<N>(M, z, frame, spec.alpha_reg,
                                            fit_radius);
  const double a_s = spec.alpha_reg - s;
  const double trunc_near = params.cN * 2.0 * K * unit_sphere_measure(N - 1) *
                            std::pow(spec.r_near, a_s) / a_s;
  est.trunc_bound = trunc_far + trunc_near;
  return est;
}

// --------------------------------------------------------------------------
// Graph formula

// F(t) = int_0^t (1 + sigma^2)^{-(N+s)/2} dsigma, the odd primitive through
// which a vertical column of the kernel integrates across a graph.
inline double F_eval(double t, const Params& params) {
  if (t == 0.0) return 0.0;
  const double expo = 0.5 * (params.N + params.s);
  const double at = std::abs(t);
  auto f = [&](double sig) { return std::pow(1.0 + sig * sig, -expo); };
  double value = 0.0;
  const double split = 8.0;
  if (at <= split) {
    value = integrate_adaptive(f, 0.0, at, 1e-15, 1e-11).value;
  } else {
    value = integrate_adaptive(f, 0.0, split, 1e-15, 1e-11).value;
    // Tail via sigma = 1/w; integrand w^{N+s-2} (1 + w^2)^{-(N+s)/2}.
    auto g = [&](double w) {
      return std::pow(w, params.N + params.s - 2.0) *
             std::pow(1.0 + w * w, -expo);
    };
    value += integrate_adaptive(g, 1.0 / at, 1.0 / split, 1e-15, 1e-11).value;
  }
  return t > 0 ? value : -value;
}

enum class GraphNormal { Down, Up };

// A circular kink line of the graph function: |x' - center| = radius.  Used
// to split the quadrature at non-smooth radii of stitched profiles.
template <int NM1>
struct GraphKink {
  Vec<NM1> center{};
  double radius = 0;
};

namespace detail {

// Radial breakpoints along the ray q' + x*dir (x > 0) induced by kinks.
template <int NM1>
inline void kink_breaks(const std::vector<GraphKink<NM1>>& kinks,
                        const Vec<NM1>& q, const Vec<NM1>& dir, double r,
                        std::vector<double>& out) {
  for (const auto& k : kinks) {
    const Vec<NM1> m = q - k.center;
    const double b = dot(m, dir);
    const double c = norm2(m) - k.radius * k.radius;
    const double disc = b * b - c;
    if (disc < 0) continue;
    const double sq = std::sqrt(disc);
    for (double t : {-b - sq, -b + sq})
      if (t > 1e-14 && t < r) out.push_back(t);
  }
}

inline double F_prime(double sigma, const Params& params) {
  return std::pow(1.0 + sigma * sigma, -0.5 * (params.N + params.s));
}

// F(a) + F(b) evaluated stably.  For a graph column pair the two arguments
// nearly cancel (a ~ -b up to O(x)); the difference is then computed as an
// integral of F' over the short interval [-b, a], which avoids subtracting
// two independently quadratured F values.
inline double f_pair(double a, double b, const Params& params) {
  const double delta = a + b;
  if (std::abs(delta) <= 1e-3 * (std::abs(a) + std::abs(b)) ||
      std::abs(delta) < 1e-9) {
    const double mid = 0.5 * (a - b);
    const double h = 0.5 * delta * 0.5773502691896258;  // Gauss 2-point
    return delta * 0.5 *
           (F_prime(mid - h, params) + F_prime(mid + h, params));
  }
  return F_eval(a, params) + F_eval(b, params);
}

}  // namespace detail

// Graph-local contribution to H at the base point q' of the graph
// x_N = u(x'): the odd-F column formula integrated over the vertical
// cylinder B'_r x (-r, r), r = spec.R_far.  The F-form removes the kernel
// singularity; the first radial panel is integrated in the substituted
// variable x = tau^{2/(1-s)} so the remaining x^{-s} endpoint behavior
// vanishes.  Exact (up to quadrature tolerance) whenever the surface
// boundary seen from z is captured by u's extension.
//
// Sign convention: `normal` is the graph orientation; Down means the unit
// normal points toward -e_N, which is the make_barrier_2d convention.
inline Estimate fmc_graph(const std::function<double(double)>& u,
                          double q_prime, const Params& params,
                          QuadratureSpec spec,
                          GraphNormal normal = GraphNormal::Down,
                          const std::vector<GraphKink<1>>& kinks = {},
                          double hessian_bound = 0) {
  if (params.N != 2) throw ConfigError("scalar fmc_graph requires N = 2");
  if (spec.R_far <= 0) spec.R_far = 1e3;
  const double r = spec.R_far;
  const double s = params.s;
  if (hessian_bound > 0) {
    const double h = 1e-4 * std::min(1.0, r);
    const double d2 =
        (u(q_prime + h) + u(q_prime - h) - 2.0 * u(q_prime)) / (h * h);
    if (std::abs(d2) > hessian_bound)
      throw NotSmoothError("finite-difference Hessian exceeds bound");
  }
  const double uq = u(q_prime);
  auto pair_term = [&](double x) {
    const double a = (uq - u(q_prime - x)) / x;
    const double b = (uq - u(q_prime + x)) / x;
    return detail::f_pair(a, b, params);
  };

  std::vector<double> breaks;
  detail::kink_breaks<1>(kinks, Vec<1>{q_prime}, Vec<1>{1.0}, r, breaks);
  detail::kink_breaks<1>(kinks, Vec<1>{q_prime}, Vec<1>{-1.0}, r, breaks);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Radial floor: below x_floor the second difference drowns in roundoff,
  // so the (tiny) exact mass there is bounded instead of integrated.  For a
  // C^2 graph |pair| <= ||u''|| x, giving 2 ||u''|| x_floor^{1-s} / (1-s).
  const double x_floor = 1e-6 * std::min(1.0, r);
  double curv_hat = 0.0;
  for (double hh : {1e-3, 1e-2}) {
    const double d2 =
        (u(q_prime + hh) + u(q_prime - hh) - 2.0 * uq) / (hh * hh);
    curv_hat = std::max(curv_hat, std::abs(d2));
  }
  const double floor_bound =
      2.0 * curv_hat * std::pow(x_floor, 1.0 - s) / (1.0 - s);

  const double x1 =
      breaks.empty() ? r : std::max(breaks.front(), 2.0 * x_floor);
  // Head panel (x_floor, x1) in the substituted variable x = tau^p, which
  // removes the x^{-s} endpoint behavior of the exact integrand.
  const double p = 2.0 / (1.0 - s);
  auto g_sub = [&](double tau) {
    if (tau <= 0) return 0.0;
    const double x = std::pow(tau, p);
    return 2.0 * pair_term(x) * std::pow(x, -1.0 - s) * p *
           std::pow(tau, p - 1.0);
  };

  QuadResult total;
  const QuadResult head = integrate_adaptive(
      g_sub, std::pow(x_floor, 1.0 / p), std::pow(x1, 1.0 / p), 1e-13, 1e-9);
  total.value += head.value;
  total.error += head.error;
  total.n_eval += head.n_eval;
  if (x1 < r) {
    auto direct = [&](double x) {
      return 2.0 * pair_term(x) * std::pow(x, -1.0 - s);
    };
    const QuadResult rest =
        integrate_piecewise(direct, x1, r, breaks, 1e-13, 1e-9);
    total.value += rest.value;
    total.error += rest.error;
    total.n_eval += rest.n_eval;
  }

  Estimate est;
  const double sign = (normal == GraphNormal::Down) ? 1.0 : -1.0;
  est.value = params.cN * sign * total.value;
  est.std_error = 0.0;
  est.trunc_bound = params.cN * (unit_sphere_measure(params.N) *
                                     std::pow(r, -s) / s +
                                 total.error + floor_bound);
  est.n_eval = total.n_eval;
  est.seed = spec.seed;
  return est;
}

// N = 3 variant: midpoint rule over theta in [0, pi) (the paired integrand
// has period pi), adaptive radial quadrature per direction.
inline Estimate fmc_graph(const std::function<double(const Vec2&)>& u,
                          const Vec2& q_prime, const Params& params,
                          QuadratureSpec spec,
                          GraphNormal normal = GraphNormal::Down,
                          const std::vector<GraphKink<2>>& kinks = {},
                          int n_theta = 64, double hessian_bound = 0) {
  if (params.N != 3) throw ConfigError("planar fmc_graph requires N = 3");
  if (spec.R_far <= 0) spec.R_far = 1e3;
  const double r = spec.R_far;
  const double s = params.s;
  if (hessian_bound > 0) {
    const double h = 1e-4 * std::min(1.0, r);
    for (const Vec2 dir : {Vec2{1, 0}, Vec2{0, 1}, Vec2{M_SQRT1_2, M_SQRT1_2}}) {
      const double d2 = (u(q_prime + h * dir) + u(q_prime - h * dir) -
                         2.0 * u(q_prime)) /
                        (h * h);
      if (std::abs(d2) > hessian_bound)
        throw NotSmoothError("finite-difference Hessian exceeds bound");
    }
  }
  const double uq = u(q_prime);
  const double p = 2.0 / (1.0 - s);
  const double rho_floor = 1e-6 * std::min(1.0, r);
  double curv_hat = 0.0;
  for (double hh : {1e-3, 1e-2})
    for (const Vec2 dd : {Vec2{1, 0}, Vec2{0, 1}}) {
      const double d2 = (u(q_prime + hh * dd) + u(q_prime - hh * dd) -
                         2.0 * uq) /
                        (hh * hh);
      curv_hat = std::max(curv_hat, std::abs(d2));
    }
  const double floor_bound = 2.0 * M_PI * curv_hat *
                             std::pow(rho_floor, 1.0 - s) / (1.0 - s);

  QuadResult total;
  for (int j = 0; j < n_theta; ++j) {
    const double theta = M_PI * (j + 0.5) / n_theta;
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    auto pair_term = [&](double rho) {
      const double a = (uq - u(q_prime - rho * dir)) / rho;
      const double b = (uq - u(q_prime + rho * dir)) / rho;
      return detail::f_pair(a, b, params);
    };
    std::vector<double> breaks;
    detail::kink_breaks<2>(kinks, q_prime, dir, r, breaks);
    detail::kink_breaks<2>(kinks, q_prime, -1.0 * dir, r, breaks);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const double rho1 =
        breaks.empty() ? r : std::max(breaks.front(), 2.0 * rho_floor);

    auto g_sub = [&](double tau) {
      if (tau <= 0) return 0.0;
      const double rho = std::pow(tau, p);
      return 2.0 * pair_term(rho) * std::pow(rho, -1.0 - s) * p *
             std::pow(tau, p - 1.0);
    };
    QuadResult ray =
        integrate_adaptive(g_sub, std::pow(rho_floor, 1.0 / p),
                           std::pow(rho1, 1.0 / p), 1e-12, 1e-8);
    if (rho1 < r) {
      auto direct = [&](double rho) {
        return 2.0 * pair_term(rho) * std::pow(rho, -1.0 - s);
      };
      const QuadResult rest =
          integrate_piecewise(direct, rho1, r, breaks, 1e-12, 1e-8);
      ray.value += rest.value;
      ray.error += rest.error;
      ray.n_eval += rest.n_eval;
    }
    total.value += ray.value * (M_PI / n_theta);
    total.error += ray.error * (M_PI / n_theta);
    total.n_eval += ray.n_eval;
  }

  Estimate est;
  const double sign = (normal == GraphNormal::Down) ? 1.0 : -1.0;
  est.value = params.cN * sign * total.value;
  est.std_error = 0.0;
  // The theta rule is spectrally accurate for these smooth-in-theta
  // integrands; fold a conservative resolution term into the bound.
  est.trunc_bound =
      params.cN * (unit_sphere_measure(params.N) * std::pow(r, -s) / s +
                   total.error + floor_bound +
                   10.0 * std::abs(total.value) / (n_theta * n_theta));
  est.n_eval = total.n_eval;
  est.seed = spec.seed;
  return est;
}

// --------------------------------------------------------------------------
// Oracle-equivalence harness (N = 2 sheets)

struct ConsistencyReport {
  Estimate mc;
  Estimate graph;
  bool compatible = false;
};

// Cross-checks the two estimators on a single graph-like sheet: rebuilds the
// sheet's graph function from its vertices, extends it beyond the boundary
// with the sight cone through z (which is exactly what crossing parity sees
// past the boundary), and compares the two intervals.
inline ConsistencyReport fmc_consistency(const Hypersurface<2>& M,
                                         const Vec2& z, const Params& params,
                                         QuadratureSpec spec) {
  spec.resolve(M.diameter);
  const auto [facet, d0] = M.nearest_facet(z);
  if (facet < 0 || d0 > 10 * M.default_tol())
    throw PointNotOnSurfaceError("z is not on the sheet");
  const Vec2 nu = M.facet_normals[facet];
  if (std::abs(nu[1]) < 0.05)
    throw InvalidStateError("sheet is not a graph over x1 near z");

  // Vertices sorted by x; the sheet must be x-monotone.
  std::vector<Vec2> pts = M.vertices;
  std::sort(pts.begin(), pts.end(),
            [](const Vec2& a, const Vec2& b) { return a[0] < b[0]; });
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1][0] <= pts[i][0])
      throw InvalidStateError("sheet is not a graph over x1");
  const double x_lo = pts.front()[0], x_hi = pts.back()[0];
  const double zx = z[0], zy = z[1];
  const double slope_r = (pts.back()[1] - zy) / (x_hi - zx);
  const double slope_l = (pts.front()[1] - zy) / (x_lo - zx);

  auto u = [pts, x_lo, x_hi, zx, zy, slope_l, slope_r](double x) {
    if (x >= x_hi) return zy + slope_r * (x - zx);
    if (x <= x_lo) return zy + slope_l * (x - zx);
    auto it = std::lower_bound(
        pts.begin(), pts.end(), x,
        [](const Vec2& p, double xv) { return p[0] < xv; });
    if (it == pts.begin()) ++it;
    const Vec2 a = *(it - 1), b = *it;
    const double t = (x - a[0]) / (b[0] - a[0]);
    return a[1] + t * (b[1] - a[1]);
  };

  ConsistencyReport rep;
  rep.mc = fmc_estimate<2>(M, z, nu, params, spec);
  const GraphNormal gn = nu[1] < 0 ? GraphNormal::Down : GraphNormal::Up;
  std::vector<GraphKink<1>> kinks;
  kinks.push_back({Vec<1>{x_lo}, 0.0});
  kinks.push_back({Vec<1>{x_hi}, 0.0});
  rep.graph = fmc_graph(u, zx, params, spec, gn, kinks);
  rep.compatible = rep.mc.overlaps(rep.graph);
  return rep;
}

}  // namespace fracmc
