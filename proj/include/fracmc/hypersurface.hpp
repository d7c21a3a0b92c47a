#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fracmc/bvh.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/vec.hpp"

namespace fracmc {

template <int N>
struct Segment {
  Vec<N> a{};
  Vec<N> b{};
};

struct CrossingResult {
  int count = 0;
  bool tangent_flag = false;
};

// Oriented compact hypersurface with boundary: a polyline complex for N=2,
// a triangle mesh for N=3.  Immutable after construction; all queries are
// const and safe to run concurrently.
//
// Facet normals define the orientation: for N=2 the normal of a segment is
// the left-hand rotation of its direction, for N=3 the right-hand normal of
// the vertex order.  Boundary entries are vertex rings: single-vertex
// entries (chain endpoints) for N=2, closed index loops for N=3.
template <int N>
struct Hypersurface {
  std::vector<Vec<N>> vertices;
  std::vector<std::array<int, N>> facets;
  std::vector<Vec<N>> facet_normals;
  std::vector<std::vector<int>> boundary;
  bool is_closed = false;

  Box<N> bbox = Box<N>::empty();
  double diameter = 0.0;
  double total_measure = 0.0;  // length (N=2) or area (N=3)

  double default_tol() const { return 1e-9 * diameter; }

  int facet_count() const { return static_cast<int>(facets.size()); }

  Vec<N> facet_vertex(int f, int k) const { return vertices[facets[f][k]]; }

  double facet_measure(int f) const { return facet_measures_[f]; }

  Vec<N> facet_barycenter(int f) const {
    Vec<N> c{};
    for (int k = 0; k < N; ++k) c = c + facet_vertex(f, k);
    return (1.0 / N) * c;
  }

  // Closest point on facet f to p.
  Vec<N> facet_closest_point(int f, const Vec<N>& p) const;

  // Squared distance from p to facet f.
  double facet_dist2(int f, const Vec<N>& p) const {
    return norm2(p - facet_closest_point(f, p));
  }

  // Nearest facet and distance.
  std::pair<int, double> nearest_facet(const Vec<N>& p) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int f = 0; f < facet_count(); ++f) {
      const double d2 = facet_dist2(f, p);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = f;
      }
    }
    return {best, std::sqrt(best_d2)};
  }

  // Distance from p to the boundary of the surface (infinity when closed).
  double boundary_distance(const Vec<N>& p) const {
    if (boundary.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ring : boundary) {
      if (ring.size() == 1) {
        best = std::min(best, dist(p, vertices[ring[0]]));
        continue;
      }
      for (size_t i = 0; i < ring.size(); ++i) {
        const Vec<N>& a = vertices[ring[i]];
        const Vec<N>& b = vertices[ring[(i + 1) % ring.size()]];
        best = std::min(best, point_segment_distance(p, a, b));
      }
    }
    return best;
  }

  // Transversal crossings of the open segment (a,b) with the surface.
  // `skip_near_a` drops hits within that distance of endpoint a without
  // flagging them; side-partition queries use it for the on-surface base
  // point, whose own facet plane always reports a hit at t = 0.
  CrossingResult crossings(const Vec<N>& a, const Vec<N>& b, double tol,
                           double skip_near_a = 0.0) const;

  // Plain intersection parameters t in (0,1) of segment (a,b) with facets,
  // without tolerance bands (local reconstruction queries).
  std::vector<std::pair<double, int>> hit_params(const Vec<N>& a,
                                                 const Vec<N>& b) const;

  void finalize();  // computes normals-dependent caches, bbox, bvh

  static double point_segment_distance(const Vec<N>& p, const Vec<N>& a,
                                       const Vec<N>& b) {
    const Vec<N> ab = b - a;
    const double t =
        std::clamp(dot(p - a, ab) / std::max(norm2(ab), 1e-300), 0.0, 1.0);
    return dist(p, a + t * ab);
  }

 private:
  std::vector<double> facet_measures_;
  std::vector<std::array<double, N>> facet_heights_;  // N=3 edge heights
  detail::Bvh<N> bvh_;
};

// ---------------------------------------------------------------------------
// Facet primitives

template <>
inline Vec2 Hypersurface<2>::facet_closest_point(int f, const Vec2& p) const {
  const Vec2 a = facet_vertex(f, 0), b = facet_vertex(f, 1);
  const Vec2 ab = b - a;
  const double t =
      std::clamp(dot(p - a, ab) / std::max(norm2(ab), 1e-300), 0.0, 1.0);
  return a + t * ab;
}

template <>
inline Vec3 Hypersurface<3>::facet_closest_point(int f, const Vec3& p) const {
  // Ericson-style point/triangle projection via barycentric clamping.
  const Vec3 a = facet_vertex(f, 0), b = facet_vertex(f, 1), c = facet_vertex(f, 2);
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + (vb * denom) * ab + (vc * denom) * ac;
}

namespace detail {

// Crossing accumulator shared by both dimensions.
struct CrossingAccum {
  int count = 0;
  bool tangent = false;
};

// Segment (a -> a+d, t in [0,1]) against polyline facet [p,q].
inline void segment_facet_hit_2d(const Vec2& a, const Vec2& d, double seg_len,
                                 const Vec2& p, const Vec2& q,
                                 const Vec2& facet_unit_normal,
                                 double facet_len, double tol,
                                 double skip_near_a, CrossingAccum& acc) {
  const Vec2 e = q - p;
  const double denom = cross2(d, e);
  const Vec2 ap = p - a;
  const double dir_dot_n = std::abs(dot((1.0 / seg_len) * d, facet_unit_normal));
  if (dir_dot_n < 1e-12) {
    // Parallel or collinear: tangent when the lines are within tol and the
    // parameter ranges overlap.
    const double line_dist = std::abs(cross2(ap, (1.0 / facet_len) * e));
    if (line_dist < tol) {
      const double t0 = dot(ap, d) / norm2(d);
      const double t1 = dot((q - a), d) / norm2(d);
      if (std::max(std::min(t0, t1), 0.0) <= std::min(std::max(t0, t1), 1.0))
        acc.tangent = true;
    }
    return;
  }
  const double t = cross2(ap, e) / denom;
  const double u = cross2(ap, d) / denom;
  const double t_band = tol / seg_len;
  const double u_band = tol / facet_len;
  const double t_skip = skip_near_a / seg_len;
  if (t < -t_band || t > 1 + t_band || u < -u_band || u > 1 + u_band) return;
  if (t <= t_skip) return;  // attributed to the on-surface endpoint a
  const bool interior = t > t_band && t < 1 - t_band && u > u_band && u < 1 - u_band;
  if (interior && dir_dot_n >= 1e-10) {
    acc.count += 1;
  } else {
    acc.tangent = true;  // near an endpoint, a facet vertex, or grazing
  }
}

// Segment against triangle [A,B,C] (Moller-Trumbore).
inline void segment_facet_hit_3d(const Vec3& a, const Vec3& d, double seg_len,
                                 const Vec3& A, const Vec3& B, const Vec3& C,
                                 const Vec3& facet_unit_normal,
                                 const std::array<double, 3>& heights,
                                 double tol, double skip_near_a,
                                 CrossingAccum& acc) {
  const Vec3 e1 = B - A, e2 = C - A;
  const Vec3 pvec = cross3(d, e2);
  const double det = dot(e1, pvec);
  const double dir_dot_n = std::abs(dot((1.0 / seg_len) * d, facet_unit_normal));
  if (dir_dot_n < 1e-12) {
    // In-plane or grazing: tangent when the endpoint plane distance is small
    // and the segment passes near the triangle.
    const double plane_dist = std::abs(dot(a - A, facet_unit_normal));
    if (plane_dist < tol) acc.tangent = true;
    return;
  }
  const double inv_det = 1.0 / det;
  const Vec3 tvec = a - A;
  const double u = dot(tvec, pvec) * inv_det;
  const Vec3 qvec = cross3(tvec, e1);
  const double v = dot(d, qvec) * inv_det;
  const double t = dot(e2, qvec) * inv_det;
  const double w = 1.0 - u - v;
  // Barycentric tolerance bands scaled to geometric distance via the
  // triangle heights (distance to edge opposite vertex k is bary_k * h_k).
  const double bu = tol / heights[0];
  const double bv = tol / heights[1];
  const double bw = tol / heights[2];
  const double t_band = tol / seg_len;
  const double t_skip = skip_near_a / seg_len;
  if (t < -t_band || t > 1 + t_band || u < -bu || v < -bv || w < -bw) return;
  if (t <= t_skip) return;
  const bool interior =
      t > t_band && t < 1 - t_band && u > bu && v > bv && w > bw;
  if (interior && dir_dot_n >= 1e-10) {
    acc.count += 1;
  } else {
    acc.tangent = true;
  }
}

}  // namespace detail

template <>
inline CrossingResult Hypersurface<2>::crossings(const Vec2& a, const Vec2& b,
                                                 double tol,
                                                 double skip_near_a) const {
  detail::CrossingAccum acc;
  const Vec2 d = b - a;
  const double seg_len = norm(d);
  if (seg_len <= 0) return {0, true};
  bvh_.visit_segment(a, b, [&](int f) {
    detail::segment_facet_hit_2d(a, d, seg_len, facet_vertex(f, 0),
                                 facet_vertex(f, 1), facet_normals[f],
                                 facet_measures_[f], tol, skip_near_a, acc);
  });
  return {acc.count, acc.tangent};
}

template <>
inline CrossingResult Hypersurface<3>::crossings(const Vec3& a, const Vec3& b,
                                                 double tol,
                                                 double skip_near_a) const {
  detail::CrossingAccum acc;
  const Vec3 d = b - a;
  const double seg_len = norm(d);
  if (seg_len <= 0) return {0, true};
  bvh_.visit_segment(a, b, [&](int f) {
    detail::segment_facet_hit_3d(a, d, seg_len, facet_vertex(f, 0),
                                 facet_vertex(f, 1), facet_vertex(f, 2),
                                 facet_normals[f], facet_heights_[f], tol,
                                 skip_near_a, acc);
  });
  return {acc.count, acc.tangent};
}

template <>
inline std::vector<std::pair<double, int>> Hypersurface<2>::hit_params(
    const Vec2& a, const Vec2& b) const {
  std::vector<std::pair<double, int>> out;
  const Vec2 d = b - a;
  bvh_.visit_segment(a, b, [&](int f) {
    const Vec2 p = facet_vertex(f, 0), q = facet_vertex(f, 1);
    const Vec2 e = q - p;
    const double denom = cross2(d, e);
    if (denom == 0.0) return;
    const double t = cross2(p - a, e) / denom;
    const double u = cross2(p - a, d) / denom;
    if (t > 0 && t < 1 && u >= 0 && u <= 1) out.push_back({t, f});
  });
  std::sort(out.begin(), out.end());
  return out;
}

template <>
inline std::vector<std::pair<double, int>> Hypersurface<3>::hit_params(
    const Vec3& a, const Vec3& b) const {
  std::vector<std::pair<double, int>> out;
  const Vec3 d = b - a;
  bvh_.visit_segment(a, b, [&](int f) {
    const Vec3 A = facet_vertex(f, 0), B = facet_vertex(f, 1),
               C = facet_vertex(f, 2);
    const Vec3 e1 = B - A, e2 = C - A;
    const Vec3 pvec = cross3(d, e2);
    const double det = dot(e1, pvec);
    if (det == 0.0) return;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = a - A;
    const double u = dot(tvec, pvec) * inv_det;
    const Vec3 qvec = cross3(tvec, e1);
    const double v = dot(d, qvec) * inv_det;
    const double t = dot(e2, qvec) * inv_det;
    if (t > 0 && t < 1 && u >= 0 && v >= 0 && u + v <= 1)
      out.push_back({t, f});
  });
  std::sort(out.begin(), out.end());
  return out;
}

template <int N>
inline void Hypersurface<N>::finalize() {
  bbox = Box<N>::empty();
  for (const auto& v : vertices) bbox.expand(v);
  diameter = bbox.diameter();
  facet_measures_.resize(facets.size());
  if constexpr (N == 3) facet_heights_.resize(facets.size());
  total_measure = 0.0;
  std::vector<Box<N>> boxes(facets.size());
  for (int f = 0; f < facet_count(); ++f) {
    Box<N> fb = Box<N>::empty();
    for (int k = 0; k < N; ++k) fb.expand(facet_vertex(f, k));
    boxes[f] = fb;
    if constexpr (N == 2) {
      facet_measures_[f] = dist(facet_vertex(f, 0), facet_vertex(f, 1));
    } else {
      const Vec3 e1 = facet_vertex(f, 1) - facet_vertex(f, 0);
      const Vec3 e2 = facet_vertex(f, 2) - facet_vertex(f, 0);
      const double area = 0.5 * norm(cross3(e1, e2));
      facet_measures_[f] = area;
      const double la = dist(facet_vertex(f, 1), facet_vertex(f, 2));
      const double lb = dist(facet_vertex(f, 0), facet_vertex(f, 2));
      const double lc = dist(facet_vertex(f, 0), facet_vertex(f, 1));
      facet_heights_[f] = {2 * area / la, 2 * area / lb, 2 * area / lc};
    }
    total_measure += facet_measures_[f];
  }
  bvh_.build(boxes);
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {

// Strict interior crossing test used by the polyline self-intersection scan.
inline bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& p,
                           const Vec2& q) {
  const Vec2 d = b - a, e = q - p;
  const double denom = cross2(d, e);
  if (denom == 0.0) {
    if (cross2(p - a, d) != 0.0) return false;
    // Collinear: overlap of parameter ranges means an embedded-manifold
    // violation just as much as a transversal crossing.
    const double l2 = norm2(d);
    double t0 = dot(p - a, d) / l2, t1 = dot(q - a, d) / l2;
    if (t0 > t1) std::swap(t0, t1);
    return t0 < 1.0 - 1e-12 && t1 > 1e-12;
  }
  const double t = cross2(p - a, e) / denom;
  const double u = cross2(p - a, d) / denom;
  const double eps = 1e-12;
  return t > eps && t < 1 - eps && u > eps && u < 1 - eps;
}

}  // namespace detail

// Builds an oriented polyline from ordered points.  Normals are the
// left-hand rotation of each segment direction; the boundary is the pair of
// endpoints unless closed.
inline Hypersurface<2> build_polyline(const std::vector<Vec2>& points,
                                      bool closed) {
  if (points.size() < 2)
    throw DegenerateFacetError("polyline needs at least 2 points");
  Hypersurface<2> M;
  M.vertices = points;
  const int n = static_cast<int>(points.size());
  const int n_seg = closed ? n : n - 1;
  Box<2> bb = Box<2>::empty();
  for (const auto& p : points) bb.expand(p);
  const double degenerate_len = std::max(1e-14, 1e-13 * bb.diameter());
  for (int i = 0; i < n_seg; ++i) {
    const int j = (i + 1) % n;
    const Vec2 d = points[j] - points[i];
    const double len = norm(d);
    if (len <= degenerate_len)
      throw DegenerateFacetError("degenerate polyline segment at index " +
                                 std::to_string(i));
    M.facets.push_back({i, j});
    M.facet_normals.push_back(rot90((1.0 / len) * d));
  }
  // Reject self-intersecting chains: crossing parity needs an embedding.
  for (int i = 0; i < n_seg; ++i) {
    for (int j = i + 2; j < n_seg; ++j) {
      if (closed && i == 0 && j == n_seg - 1) continue;  // adjacent via wrap
      if (detail::segments_cross(points[M.facets[i][0]], points[M.facets[i][1]],
                                 points[M.facets[j][0]],
                                 points[M.facets[j][1]]))
        throw SelfIntersectionError("polyline segments " + std::to_string(i) +
                                    " and " + std::to_string(j) + " cross");
    }
  }
  M.is_closed = closed;
  if (!closed) {
    M.boundary.push_back({0});
    M.boundary.push_back({n - 1});
  }
  M.finalize();
  return M;
}

// Several disjoint chains as one hypersurface (flow states, barrier sheets).
inline Hypersurface<2> build_polyline_multi(
    const std::vector<std::vector<Vec2>>& chains,
    const std::vector<bool>& closed_flags) {
  Hypersurface<2> M;
  for (size_t c = 0; c < chains.size(); ++c) {
    const Hypersurface<2> part = build_polyline(chains[c], closed_flags[c]);
    const int base = static_cast<int>(M.vertices.size());
    M.vertices.insert(M.vertices.end(), part.vertices.begin(),
                      part.vertices.end());
    for (const auto& f : part.facets)
      M.facets.push_back({f[0] + base, f[1] + base});
    M.facet_normals.insert(M.facet_normals.end(), part.facet_normals.begin(),
                           part.facet_normals.end());
    for (const auto& ring : part.boundary) {
      std::vector<int> shifted;
      for (int idx : ring) shifted.push_back(idx + base);
      M.boundary.push_back(shifted);
    }
  }
  // Cross-component intersections break parity just like self-intersections.
  for (size_t i = 0; i < M.facets.size(); ++i) {
    for (size_t j = i + 1; j < M.facets.size(); ++j) {
      const bool adjacent = M.facets[i][0] == M.facets[j][0] ||
                            M.facets[i][0] == M.facets[j][1] ||
                            M.facets[i][1] == M.facets[j][0] ||
                            M.facets[i][1] == M.facets[j][1];
      if (adjacent) continue;
      if (detail::segments_cross(M.vertices[M.facets[i][0]],
                                 M.vertices[M.facets[i][1]],
                                 M.vertices[M.facets[j][0]],
                                 M.vertices[M.facets[j][1]]))
        throw SelfIntersectionError("chains intersect");
    }
  }
  M.is_closed = M.boundary.empty();
  M.finalize();
  return M;
}

// Builds an oriented triangle mesh.  Boundary rings are chained from edges
// with a single incident triangle; inconsistent winding across a shared
// edge is rejected as non-orientable.
inline Hypersurface<3> build_trimesh(
    const std::vector<Vec3>& vertices,
    const std::vector<std::array<int, 3>>& triangles) {
  Hypersurface<3> M;
  M.vertices = vertices;
  const int nv = static_cast<int>(vertices.size());
  Box<3> bb = Box<3>::empty();
  for (const auto& p : vertices) bb.expand(p);
  const double degenerate_area =
      std::max(1e-14, 1e-13 * bb.diameter() * bb.diameter());

  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= nv)
        throw DegenerateFacetError("triangle index out of range");
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw DegenerateFacetError("triangle with repeated vertex");
    const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
    const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
    const Vec3 n = cross3(e1, e2);
    const double area = 0.5 * norm(n);
    if (area <= degenerate_area)
      throw DegenerateFacetError("degenerate triangle");
    M.facets.push_back(tri);
    M.facet_normals.push_back((0.5 / area) * n);
  }

  // Edge incidence: key is the undirected edge, value tracks the directed
  // traversals seen.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (const auto& tri : M.facets) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({a, b});
    }
  }
  std::map<int, std::vector<int>> boundary_next;
  for (const auto& [key, dirs] : edges) {
    if (dirs.size() > 2)
      throw NonManifoldEdgeError("edge with " + std::to_string(dirs.size()) +
                                 " incident triangles");
    if (dirs.size() == 2 && dirs[0] == dirs[1])
      throw NonOrientableError("shared edge traversed twice in the same direction");
    if (dirs.size() == 1)
      boundary_next[dirs[0].first].push_back(dirs[0].second);
  }

  // Chain boundary edges into rings following facet traversal order.
  std::map<int, int> remaining;
  for (const auto& [v, nexts] : boundary_next) remaining[v] = static_cast<int>(nexts.size());
  for (const auto& [start, nexts] : boundary_next) {
    while (remaining[start] > 0) {
      std::vector<int> ring;
      int v = start;
      do {
        ring.push_back(v);
        auto it = boundary_next.find(v);
        if (it == boundary_next.end() || remaining[v] == 0)
          throw NonManifoldEdgeError("open boundary chain in mesh");
        const int nxt = it->second[--remaining[v]];
        v = nxt;
      } while (v != start && ring.size() <= edges.size() + 1);
      if (v != start)
        throw NonManifoldEdgeError("boundary chain failed to close");
      M.boundary.push_back(ring);
    }
  }
  M.is_closed = M.boundary.empty();
  M.finalize();
  return M;
}

// Counts transversal interior crossings of seg with M.  tangent_flag
// reports any hit near a facet edge/vertex, a grazing incidence, or a
// segment endpoint lying on the surface; parity is unreliable in those
// cases and samplers are expected to redraw.
template <int N>
inline CrossingResult intersect_count(const Segment<N>& seg,
                                      const Hypersurface<N>& M, double tol) {
  return M.crossings(seg.a, seg.b, tol);
}

}  // namespace fracmc
