#pragma once

#include <cstdint>

#include "fracmc/errors.hpp"
#include "fracmc/hypersurface.hpp"
#include "fracmc/rng.hpp"
#include "fracmc/vec.hpp"

namespace fracmc {

enum class SideLabel { Interior, Exterior, Indeterminate };

// Classification of a query point y relative to a base point z on M with
// unit normal nu.  Let p be the parity of transversal crossings of the open
// segment (z, y) with M (the z endpoint, which lies on M, never counts):
//
//   Interior:  (p odd  and (z-y).nu < 0)  or  (p even and (z-y).nu > 0)
//   Exterior:  (p odd  and (z-y).nu > 0)  or  (p even and (z-y).nu < 0)
//
// Indeterminate when the parity is unreliable (tangency, hit near a facet
// vertex, y on the surface) or when y sits on the tangent hyperplane of z
// within tolerance.  Indeterminate labels form a null set; Monte Carlo
// callers reject and redraw.
template <int N>
inline SideLabel classify_with_facet(const Hypersurface<N>& M, int z_facet,
                                     const Vec<N>& z, const Vec<N>& nu,
                                     const Vec<N>& y, double tol) {
  const Vec<N> zy = z - y;
  const double side = dot(zy, nu);
  const double r = norm(zy);
  if (!(r > 0) || std::abs(side) < tol * r) return SideLabel::Indeterminate;
  const CrossingResult cr =
      M.crossings(z, y, tol, /*skip_near_a=*/std::max(tol, 1e-12 * r));
  if (cr.tangent_flag) return SideLabel::Indeterminate;
  const bool odd = (cr.count % 2) != 0;
  if (odd) return side < 0 ? SideLabel::Interior : SideLabel::Exterior;
  return side > 0 ? SideLabel::Interior : SideLabel::Exterior;
  (void)z_facet;
}

// Public entry: verifies that z actually lies on M and that nu matches the
// orientation of the containing facet (up to sign).
template <int N>
inline SideLabel classify(const Hypersurface<N>& M, const Vec<N>& z,
                          const Vec<N>& nu, const Vec<N>& y, double tol) {
  const auto [facet, d] = M.nearest_facet(z);
  if (facet < 0 || d > tol)
    throw PointNotOnSurfaceError("base point is not on the surface");
  const double align = std::abs(dot(nu, M.facet_normals[facet]));
  if (align < 1.0 - 1e-6)
    throw PointNotOnSurfaceError("normal does not match the containing facet");
  return classify_with_facet<N>(M, facet, z, nu, y, tol);
}

struct PartitionVolumes {
  double vol_interior = 0.0;
  double vol_exterior = 0.0;
  double vol_indeterminate = 0.0;
  int64_t n_samples = 0;
};

// Monte Carlo volume of each label within an axis-aligned box; diagnostic
// companion of classify().
template <int N>
inline PartitionVolumes partition_volume(const Hypersurface<N>& M,
                                         const Vec<N>& z, const Vec<N>& nu,
                                         const Box<N>& region,
                                         int64_t n_samples, uint64_t seed,
                                         double tol = -1.0) {
  if (tol < 0) tol = M.default_tol();
  PartitionVolumes out;
  out.n_samples = n_samples;
  const double vol = region.volume();
  if (vol <= 0 || n_samples <= 0) return out;
  const auto [facet, d] = M.nearest_facet(z);
  if (facet < 0 || d > tol)
    throw PointNotOnSurfaceError("base point is not on the surface");
  int64_t ni = 0, ne = 0, nx = 0;
  for (int64_t i = 0; i < n_samples; ++i) {
    SampleStream rng(seed, static_cast<uint64_t>(i));
    Vec<N> y;
    for (int k = 0; k < N; ++k)
      y[k] = region.lo[k] + (region.hi[k] - region.lo[k]) * rng.next_double();
    switch (classify_with_facet<N>(M, facet, z, nu, y, tol)) {
      case SideLabel::Interior: ++ni; break;
      case SideLabel::Exterior: ++ne; break;
      case SideLabel::Indeterminate: ++nx; break;
    }
  }
  const double w = vol / static_cast<double>(n_samples);
  out.vol_interior = w * static_cast<double>(ni);
  out.vol_exterior = w * static_cast<double>(ne);
  out.vol_indeterminate = w * static_cast<double>(nx);
  return out;
}

}  // namespace fracmc
