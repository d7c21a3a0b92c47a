#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fracmc/curvature.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/estimate.hpp"
#include "fracmc/hypersurface.hpp"
#include "fracmc/parallel.hpp"
#include "fracmc/rng.hpp"

namespace fracmc {

// Monte Carlo estimation of the fractional area
//
//   Per_s(M; Omega) = c_N iint_{X(M)} max{chi_O(x), chi_O(y)} |x-y|^{-(N+s)}
//
// over pairs whose segment crosses M an odd number of times, plus the
// classical two-set fractional perimeter P_s(E; Omega) used as an oracle on
// closed surfaces.
//
// Estimator layout: pairs are drawn as (x, x + r theta) with x uniform in
// Omega and r importance-sampled with density ~ r^{-1-s} on [delta0, R_max];
// even sample indices target both-endpoints-in-Omega pairs, odd indices the
// mixed pairs (whose symmetric twin with roles swapped is folded in as an
// exact factor 2).  The kernel mass of pairs closer than delta0 straddling M
// is added in closed form from the flat local model
//
//   T_near = c_N |M| vol(B^{N-1}) delta0^{1-s} / (1-s),
//
// with its curvature/boundary model error charged to trunc_bound; pure
// truncation below the distances representable in doubles would otherwise
// dominate for s near 1.

// Axis-aligned box or ball region, used both for the localization domain
// Omega and for the set E of the classical oracle.
template <int N>
struct Region {
  enum class Kind { Ball, BoxKind, Polygon, Empty };
  Kind kind = Kind::Ball;
  Vec<N> center{};
  double radius = 0;
  Box<N> box{};
  std::vector<Vec2> polygon;  // N = 2 only, counterclockwise

  static Region ball(const Vec<N>& c, double r) {
    Region reg;
    reg.kind = Kind::Ball;
    reg.center = c;
    reg.radius = r;
    return reg;
  }
  static Region box_region(const Box<N>& b) {
    Region reg;
    reg.kind = Kind::BoxKind;
    reg.box = b;
    return reg;
  }
  static Region empty() {
    Region reg;
    reg.kind = Kind::Empty;
    return reg;
  }

  bool contains(const Vec<N>& p) const {
    switch (kind) {
      case Kind::Ball: return dist(p, center) <= radius;
      case Kind::BoxKind: return box.contains(p);
      case Kind::Empty: return false;
      case Kind::Polygon: {
        if constexpr (N == 2) {
          // Even-odd rule.
          bool in = false;
          const size_t n = polygon.size();
          for (size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2 &a = polygon[i], &b = polygon[j];
            if ((a[1] > p[1]) != (b[1] > p[1]) &&
                p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0])
              in = !in;
          }
          return in;
        }
        return false;
      }
    }
    return false;
  }

  double volume() const {
    switch (kind) {
      case Kind::Ball: return unit_ball_volume(N) * std::pow(radius, N);
      case Kind::BoxKind: return box.volume();
      case Kind::Empty: return 0.0;
      case Kind::Polygon: {
        if constexpr (N == 2) {
          double a = 0;
          const size_t n = polygon.size();
          for (size_t i = 0, j = n - 1; i < n; j = i++)
            a += cross2(polygon[j], polygon[i]);
          return 0.5 * std::abs(a);
        }
        return 0.0;
      }
    }
    return 0.0;
  }

  // Surface measure of the region boundary (perimeter / area).
  double boundary_measure() const {
    switch (kind) {
      case Kind::Ball:
        return unit_sphere_measure(N) * std::pow(radius, N - 1);
      case Kind::BoxKind: {
        if constexpr (N == 2) {
          return 2 * ((box.hi[0] - box.lo[0]) + (box.hi[1] - box.lo[1]));
        } else {
          const double a = box.hi[0] - box.lo[0], b = box.hi[1] - box.lo[1],
                       c = box.hi[2] - box.lo[2];
          return 2 * (a * b + b * c + a * c);
        }
      }
      case Kind::Empty: return 0.0;
      case Kind::Polygon: {
        if constexpr (N == 2) {
          double l = 0;
          const size_t n = polygon.size();
          for (size_t i = 0, j = n - 1; i < n; j = i++)
            l += dist(polygon[j], polygon[i]);
          return l;
        }
        return 0.0;
      }
    }
    return 0.0;
  }

  Box<N> bounding_box() const {
    Box<N> b = Box<N>::empty();
    switch (kind) {
      case Kind::Ball:
        for (int i = 0; i < N; ++i) {
          Vec<N> lo = center, hi = center;
          lo[i] -= radius;
          hi[i] += radius;
          b.expand(lo);
          b.expand(hi);
        }
        break;
      case Kind::BoxKind: b = box; break;
      case Kind::Empty: break;
      case Kind::Polygon:
        if constexpr (N == 2)
          for (const auto& p : polygon) b.expand(p);
        break;
    }
    return b;
  }

  // Distance from an interior point to the region boundary (0 outside).
  double interior_margin(const Vec<N>& p) const {
    switch (kind) {
      case Kind::Ball: return radius - dist(p, center);
      case Kind::BoxKind: {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < N; ++i) {
          m = std::min(m, p[i] - box.lo[i]);
          m = std::min(m, box.hi[i] - p[i]);
        }
        return m;
      }
      case Kind::Empty: return 0.0;
      case Kind::Polygon: {
        if constexpr (N == 2) {
          if (!contains(p)) return 0.0;
          double m = std::numeric_limits<double>::infinity();
          const size_t n = polygon.size();
          for (size_t i = 0, j = n - 1; i < n; j = i++)
            m = std::min(m, Hypersurface<2>::point_segment_distance(
                                p, polygon[j], polygon[i]));
          return m;
        }
        return 0.0;
      }
    }
    return 0.0;
  }

  Vec<N> sample_uniform(SampleStream& rng) const {
    switch (kind) {
      case Kind::Ball: {
        const Vec<N> dir = rng.next_unit_vector<N>();
        const double r =
            radius * std::pow(rng.next_double_open0(), 1.0 / N);
        return center + r * dir;
      }
      case Kind::BoxKind: {
        Vec<N> p;
        for (int i = 0; i < N; ++i)
          p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * rng.next_double();
        return p;
      }
      case Kind::Polygon: {
        if constexpr (N == 2) {
          const Box<2> b = bounding_box();
          for (int k = 0; k < 10000; ++k) {
            Vec2 p{b.lo[0] + (b.hi[0] - b.lo[0]) * rng.next_double(),
                   b.lo[1] + (b.hi[1] - b.lo[1]) * rng.next_double()};
            if (contains(p)) return p;
          }
        }
        throw NonConvergentError("polygon rejection sampling starved");
      }
      case Kind::Empty:
        throw InvalidStateError("cannot sample the empty region");
    }
    return {};
  }
};

template <int N>
using Domain = Region<N>;

namespace detail {

// Shared pair-sampling core for Per_s and P_s style double integrals.
// accept(x, y, rng) returns the integer weight of the pair (0 when it does
// not contribute, -1 to ask for a redraw).
template <int N, typename AcceptFn>
inline Estimate pair_integral(const Region<N>& x_region, double s, double cN,
                              double delta0, double r_max, int64_t n_pairs,
                              uint64_t seed, const AcceptFn& accept,
                              int64_t* n_eval_out) {
  const double A = std::pow(delta0, -s);
  const double B = std::pow(r_max, -s);
  const double W =
      x_region.volume() * unit_sphere_measure(N) * (A - B) / s;

  const int64_t block = 1 << 14;
  const int64_t n_blocks = (n_pairs + block - 1) / block;
  struct Accum {
    int64_t sum = 0, sumsq = 0, evals = 0;
    bool exhausted = false;
  };
  std::vector<Accum> partial(static_cast<size_t>(n_blocks));
  std::atomic<bool> abort{false};

  parallel_for(n_blocks, [&](int64_t bi) {
    if (abort.load(std::memory_order_relaxed)) return;
    Accum acc;
    const int64_t lo = bi * block, hi = std::min(n_pairs, lo + block);
    for (int64_t i = lo; i < hi; ++i) {
      SampleStream rng(seed, static_cast<uint64_t>(i));
      bool done = false;
      for (int attempt = 0; attempt < 100 && !done; ++attempt) {
        const Vec<N> x = x_region.sample_uniform(rng);
        const double u = rng.next_double();
        const double r = std::pow(A - u * (A - B), -1.0 / s);
        const Vec<N> y = x + r * rng.next_unit_vector<N>();
        const int w = accept(i, x, y, rng);
        acc.evals += 1;
        if (w < 0) continue;  // unreliable parity: redraw
        acc.sum += w;
        acc.sumsq += w * w;
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

  int64_t sum = 0, sumsq = 0, evals = 0;
  bool exhausted = false;
  for (const Accum& a : partial) {
    sum += a.sum;
    sumsq += a.sumsq;
    evals += a.evals;
    exhausted |= a.exhausted;
  }
  if (exhausted)
    throw NonConvergentError("pair sample exhausted its redraw budget");
  if (n_eval_out) *n_eval_out = evals;

  const double n = static_cast<double>(n_pairs);
  const double mean = static_cast<double>(sum) / n;
  const double ex2 = static_cast<double>(sumsq) / n;
  const double var = std::max(0.0, ex2 - mean * mean) * (n / std::max(1.0, n - 1));
  Estimate est;
  est.value = cN * W * mean;
  est.std_error = cN * W * std::sqrt(var / n);
  est.seed = seed;
  est.n_eval = evals;
  return est;
}

// Curvature scale of the surface: largest facet turn angle over facet size.
template <int N>
inline double curvature_scale(const Hypersurface<N>& M) {
  double kappa = 0.0;
  if constexpr (N == 2) {
    std::map<int, std::vector<int>> at_vertex;
    for (int f = 0; f < M.facet_count(); ++f) {
      at_vertex[M.facets[f][0]].push_back(f);
      at_vertex[M.facets[f][1]].push_back(f);
    }
    for (const auto& [v, fs] : at_vertex) {
      if (fs.size() != 2) continue;
      const double c = std::clamp(
          dot(M.facet_normals[fs[0]], M.facet_normals[fs[1]]), -1.0, 1.0);
      const double angle = std::acos(c);
      const double h =
          0.5 * (M.facet_measure(fs[0]) + M.facet_measure(fs[1]));
      kappa = std::max(kappa, angle / std::max(h, 1e-12));
    }
  } else {
    std::map<std::pair<int, int>, std::vector<int>> at_edge;
    for (int f = 0; f < M.facet_count(); ++f)
      for (int k = 0; k < 3; ++k) {
        const int a = M.facets[f][k], b = M.facets[f][(k + 1) % 3];
        at_edge[{std::min(a, b), std::max(a, b)}].push_back(f);
      }
    for (const auto& [e, fs] : at_edge) {
      if (fs.size() != 2) continue;
      const double c = std::clamp(
          dot(M.facet_normals[fs[0]], M.facet_normals[fs[1]]), -1.0, 1.0);
      const double angle = std::acos(c);
      const double h = dist(M.vertices[e.first], M.vertices[e.second]);
      kappa = std::max(kappa, angle / std::max(h, 1e-12));
    }
  }
  return kappa;
}

}  // namespace detail

// Default near/far split of the pair integral.  The near-diagonal kernel
// mass concentrates ever harder at the diagonal as s -> 1, so the analytic
// near term takes a larger slice there.
template <int N>
inline double default_delta0(const Hypersurface<N>& M, double s) {
  const double exponent = 5.0 * s - 6.5;  // 1e-4 at s=0.5, 1e-2 at s=0.9
  return M.diameter *
         std::clamp(std::pow(10.0, exponent), 1e-7, 2e-2);
}

// Fractional area of M relative to omega via the parity kernel, with the
// max{chi_Omega(x), chi_Omega(y)} localization factor.
template <int N>
inline Estimate per_s_estimate(const Hypersurface<N>& M,
                               const Domain<N>& omega, const Params& params,
                               QuadratureSpec spec) {
  if (!params.valid()) throw ConfigError("invalid Params");
  const double s = params.s;

  double margin = std::numeric_limits<double>::infinity();
  for (const auto& v : M.vertices)
    margin = std::min(margin, omega.interior_margin(v));
  if (!(margin > 0))
    throw NotContainedError("M must lie in the interior of Omega");

  // Near-diagonal analytic term: pairs closer than delta0 straddling M,
  // modeled on the local flat picture.  delta0 stays below the domain
  // margin so both endpoints of near pairs are inside Omega.
  double delta0 = spec.r_near > 0 ? spec.r_near : default_delta0(M, s);
  delta0 = std::min(delta0, 0.5 * margin);
  const double r_max =
      spec.R_far > 0 ? spec.R_far : 1e6 * omega.bounding_box().diameter();
  if (!(delta0 > 0) || !(delta0 < r_max))
    throw ConfigError("need 0 < delta0 < R_far");

  const double near_mass = params.cN * M.total_measure *
                           unit_ball_volume(N - 1) *
                           std::pow(delta0, 1.0 - s) / (1.0 - s);
  // Model error of the flat near-field picture: curvature and open edges.
  const double kappa = detail::curvature_scale(M);
  double boundary_weight = 0.0;
  for (const auto& ring : M.boundary)
    boundary_weight += ring.size() == 1 ? 1.0 : static_cast<double>(ring.size());
  const double rel_model_err =
      std::min(1.0, 2.0 * delta0 * kappa +
                        2.0 * boundary_weight * delta0 / M.total_measure);
  const double near_err = near_mass * rel_model_err;

  // Pair weights follow the unordered-pair convention, under which
  // Per_s(boundary of E) equals the two-set P_s(E) exactly.  Even sample
  // indices are the both-in stratum (weight 1), odd indices the mixed
  // stratum whose swapped twin is folded in as weight 2; the 50/50 index
  // split cancels against each stratum appearing with density 1/2.
  const double tol = M.default_tol();
  auto accept = [&](int64_t i, const Vec<N>& x, const Vec<N>& y,
                    SampleStream&) -> int {
    const CrossingResult cr = M.crossings(x, y, tol);
    if (cr.tangent_flag) return -1;
    if ((cr.count & 1) == 0) return 0;
    const bool y_in = omega.contains(y);
    if ((i & 1) == 0) return y_in ? 1 : 0;  // both-in stratum
    return y_in ? 0 : 2;                    // mixed stratum, symmetric twin
  };

  int64_t evals = 0;
  Estimate est =
      detail::pair_integral<N>(omega, s, params.cN, delta0, r_max,
                               spec.n_samples, spec.seed, accept, &evals);
  est.value += near_mass;

  const double trunc_far = params.cN * 2.0 * M.total_measure *
                           unit_ball_volume(N - 1) *
                           omega.bounding_box().diameter() *
                           std::pow(r_max, -s) / s;
  est.trunc_bound = near_err + trunc_far;
  return est;
}

// Divergence diagnostic: the parity pair integral WITHOUT the
// max{chi_Omega} localization factor, truncated at pair separation R_far.
// For surfaces with boundary this integral diverges like R_far^{1-s}; the
// localized estimator above must stay finite as Omega shrinks to M.
//
// Pairs are drawn in tube coordinates (a base point b in a box around M,
// a direction, a separation r, and the position of b along the segment), so
// crossing pairs are produced at every separation scale without starving.
// The sampling density of an ordered pair is
//   p(x,y) = p_r(r) / (omega_{N-1} r^{N-1}) * L(x,y) / (|box| r),
// with L the length of [x,y] inside the box, giving the exact weight below.
template <int N>
inline Estimate per_s_unlocalized_diagnostic(const Hypersurface<N>& M,
                                             const Params& params,
                                             QuadratureSpec spec) {
  if (!params.valid()) throw ConfigError("invalid Params");
  const double s = params.s;
  const double delta0 = spec.r_near > 0 ? spec.r_near : default_delta0(M, s);
  const double r_max = spec.R_far > 0 ? spec.R_far : 1e3 * M.diameter;

  Box<N> box = M.bbox;
  const double pad = 0.5 * M.diameter;
  for (int i = 0; i < N; ++i) {
    box.lo[i] -= pad;
    box.hi[i] += pad;
  }
  double box_vol = 1;
  for (int i = 0; i < N; ++i) box_vol *= box.hi[i] - box.lo[i];

  const double A = std::pow(delta0, -s);
  const double B = std::pow(r_max, -s);
  const double tol = M.default_tol();

  auto clip_length = [&](const Vec<N>& x, const Vec<N>& y) {
    double t0 = 0.0, t1 = 1.0;
    for (int i = 0; i < N; ++i) {
      const double d = y[i] - x[i];
      if (d == 0.0) {
        if (x[i] < box.lo[i] || x[i] > box.hi[i]) return 0.0;
        continue;
      }
      double ta = (box.lo[i] - x[i]) / d;
      double tb = (box.hi[i] - x[i]) / d;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    return std::max(0.0, t1 - t0) * dist(x, y);
  };

  const int64_t n_pairs = spec.n_samples;
  const int64_t block = 1 << 14;
  const int64_t n_blocks = (n_pairs + block - 1) / block;
  std::vector<double> sums(static_cast<size_t>(n_blocks), 0.0);
  std::vector<double> sumsqs(static_cast<size_t>(n_blocks), 0.0);
  std::vector<int64_t> evals(static_cast<size_t>(n_blocks), 0);

  parallel_for(n_blocks, [&](int64_t bi) {
    const int64_t lo = bi * block, hi = std::min(n_pairs, lo + block);
    double sum = 0, sumsq = 0;
    int64_t ev = 0;
    for (int64_t i = lo; i < hi; ++i) {
      SampleStream rng(spec.seed, static_cast<uint64_t>(i));
      for (int attempt = 0; attempt < 100; ++attempt) {
        Vec<N> b;
        for (int k = 0; k < N; ++k)
          b[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * rng.next_double();
        const double u = rng.next_double();
        const double r = std::pow(A - u * (A - B), -1.0 / s);
        const Vec<N> dir = rng.next_unit_vector<N>();
        const double t = r * rng.next_double();
        const Vec<N> x = b - t * dir;
        const Vec<N> y = x + r * dir;
        const CrossingResult cr = M.crossings(x, y, tol);
        ev += 1;
        if (cr.tangent_flag) continue;
        double v = 0.0;
        if (cr.count & 1) {
          const double L = clip_length(x, y);
          if (L > 0)
            v = unit_sphere_measure(N) * box_vol * (A - B) * r / (s * L);
        }
        sum += v;
        sumsq += v * v;
        break;
      }
    }
    sums[static_cast<size_t>(bi)] = sum;
    sumsqs[static_cast<size_t>(bi)] = sumsq;
    evals[static_cast<size_t>(bi)] = ev;
  });

  double sum = 0, sumsq = 0;
  int64_t ev = 0;
  for (int64_t bi = 0; bi < n_blocks; ++bi) {
    sum += sums[static_cast<size_t>(bi)];
    sumsq += sumsqs[static_cast<size_t>(bi)];
    ev += evals[static_cast<size_t>(bi)];
  }
  const double n = static_cast<double>(n_pairs);
  const double mean = sum / n;
  const double var =
      std::max(0.0, sumsq / n - mean * mean) * (n / std::max(1.0, n - 1));

  const double near_mass = params.cN * M.total_measure *
                           unit_ball_volume(N - 1) *
                           std::pow(delta0, 1.0 - s) / (1.0 - s);
  Estimate est;
  est.value = params.cN * 0.5 * mean + near_mass;
  est.std_error = params.cN * 0.5 * std::sqrt(var / n);
  est.trunc_bound = 0.0;  // diagnostic: the point is what was truncated
  est.n_eval = ev;
  est.seed = spec.seed;
  return est;
}

// Classical two-set fractional perimeter P_s(E; Omega), used as the oracle
// for closed surfaces M = boundary of E.
template <int N>
inline Estimate classical_ps_oracle(const Region<N>& E, const Domain<N>& omega,
                                    const Params& params, QuadratureSpec spec) {
  if (!params.valid()) throw ConfigError("invalid Params");
  const double s = params.s;
  Estimate zero;
  zero.seed = spec.seed;
  if (E.kind == Region<N>::Kind::Empty || E.volume() <= 0) return zero;

  // Term decomposition: T1 = int_{E cap O} int_{E^c}, T2 = int_{E cap O^c}
  // int_{E^c cap O}.  When E is contained in Omega the second term is empty.
  double outside_fraction = 0.0;
  {
    const int64_t probes = 4096;
    int64_t out = 0;
    for (int64_t i = 0; i < probes; ++i) {
      SampleStream rng(derive_seed(spec.seed, 777), static_cast<uint64_t>(i));
      if (!omega.contains(E.sample_uniform(rng))) ++out;
    }
    outside_fraction = static_cast<double>(out) / probes;
  }

  double delta0 = spec.r_near > 0 ? spec.r_near : 1e-4 * E.bounding_box().diameter();
  const double r_max =
      spec.R_far > 0 ? spec.R_far : 1e6 * omega.bounding_box().diameter();

  const double near_mass = params.cN * E.boundary_measure() *
                           unit_ball_volume(N - 1) *
                           std::pow(delta0, 1.0 - s) / (1.0 - s);
  const double near_err =
      near_mass * std::min(1.0, 4.0 * delta0 / E.bounding_box().diameter());

  // T1 with x ~ U(E): weight [x in Omega][y in E^c].  Near pairs are the
  // analytic term; redraws only on starved polygon sampling.
  auto accept1 = [&](int64_t, const Vec<N>& x, const Vec<N>& y,
                     SampleStream&) -> int {
    if (!omega.contains(x)) return 0;
    return E.contains(y) ? 0 : 1;
  };
  int64_t evals = 0;
  Estimate t1 = detail::pair_integral<N>(E, s, params.cN, delta0, r_max,
                                         spec.n_samples, spec.seed, accept1,
                                         &evals);

  Estimate est = t1;
  est.value += near_mass;

  if (outside_fraction > 0) {
    // T2 with x ~ U(E), accepted when x is outside Omega and y lands in
    // E^c cap Omega.
    auto accept2 = [&](int64_t, const Vec<N>& x, const Vec<N>& y,
                       SampleStream&) -> int {
      if (omega.contains(x)) return 0;
      return (!E.contains(y) && omega.contains(y)) ? 1 : 0;
    };
    int64_t evals2 = 0;
    const Estimate t2 = detail::pair_integral<N>(
        E, s, params.cN, delta0, r_max, spec.n_samples,
        derive_seed(spec.seed, 2), accept2, &evals2);
    est.value += t2.value;
    est.std_error = std::hypot(est.std_error, t2.std_error);
    est.n_eval += evals2;
  }

  const double trunc_far = params.cN * 2.0 * E.boundary_measure() *
                           unit_ball_volume(N - 1) *
                           omega.bounding_box().diameter() *
                           std::pow(r_max, -s) / s;
  est.trunc_bound = near_err + trunc_far;
  return est;
}

// --------------------------------------------------------------------------
// s -> 1 limit scan

struct AreaLimitRow {
  double s = 0;
  Estimate per_s;
  double scaled = 0;  // (1-s) * value
};

struct AreaLimitScan {
  std::vector<AreaLimitRow> rows;
  double extrapolated = 0;  // intercept of the linear fit in (1-s)
  bool monotone = true;     // scaled values monotone across the scan
};

template <int N>
inline AreaLimitScan area_limit_scan(const Hypersurface<N>& M,
                                     const Domain<N>& omega,
                                     const std::vector<double>& s_values,
                                     const Params& base_params,
                                     const QuadratureSpec& spec) {
  AreaLimitScan out;
  double prev = 0;
  for (size_t i = 0; i < s_values.size(); ++i) {
    const double s = s_values[i];
    if (!(s > 0) || !(s < 1) || (i > 0 && s <= s_values[i - 1]))
      throw ConfigError("s values must be strictly increasing in (0,1)");
    Params p = base_params;
    p.s = s;
    QuadratureSpec sp = spec;
    sp.seed = derive_seed(spec.seed, i);
    AreaLimitRow row;
    row.s = s;
    row.per_s = per_s_estimate(M, omega, p, sp);
    row.scaled = (1.0 - s) * row.per_s.value;
    if (i > 0 && (row.scaled - prev) * (out.rows[0].scaled - row.scaled) > 0)
      out.monotone = false;
    prev = row.scaled;
    out.rows.push_back(row);
  }
  // Least-squares fit of scaled against h = 1-s (quadratic when three or
  // more points are available, else linear); the intercept is the h -> 0
  // limit.  (1-s) Per_s is analytic in h with a steep slope ~ log(D/delta),
  // so reliable extrapolation wants s values near 1.
  const size_t n = out.rows.size();
  if (n == 1) {
    out.extrapolated = out.rows[0].scaled;
  } else {
    const int deg = n >= 3 ? 2 : 1;
    // Normal equations for the Vandermonde fit.
    double A[3][3] = {{0}};
    double rhs[3] = {0};
    for (const auto& r : out.rows) {
      const double h = 1.0 - r.s;
      double pw[3] = {1.0, h, h * h};
      for (int i = 0; i <= deg; ++i) {
        rhs[i] += pw[i] * r.scaled;
        for (int j = 0; j <= deg; ++j) A[i][j] += pw[i] * pw[j];
      }
    }
    // Gaussian elimination on the (deg+1)^2 system.
    const int m = deg + 1;
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int row = col + 1; row < m; ++row)
        if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
      std::swap(A[col], A[piv]);
      std::swap(rhs[col], rhs[piv]);
      for (int row = col + 1; row < m; ++row) {
        const double f = A[row][col] / A[col][col];
        for (int k = col; k < m; ++k) A[row][k] -= f * A[col][k];
        rhs[row] -= f * rhs[col];
      }
    }
    double coef[3] = {0};
    for (int row = m - 1; row >= 0; --row) {
      double acc = rhs[row];
      for (int k = row + 1; k < m; ++k) acc -= A[row][k] * coef[k];
      coef[row] = acc / A[row][row];
    }
    out.extrapolated = coef[0];
  }
  return out;
}

}  // namespace fracmc
