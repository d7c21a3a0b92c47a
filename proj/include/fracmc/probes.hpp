#pragma once

#include <set>
#include <vector>

#include "fracmc/curvature.hpp"
#include "fracmc/estimate.hpp"
#include "fracmc/hypersurface.hpp"

namespace fracmc {

// Sliding probes: move a hyperplane or a ball until first contact with the
// surface and evaluate the curvature there.  A critical surface must show
// |H| within noise at every interior touching point; a resolved nonzero
// value is the numerical counterpart of the sliding-method contradiction.

enum class ProbeVerdict { ConsistentWithCritical, ViolatesCriticality, NoContact };

template <int N>
struct ContactReport {
  double lambda_star = 0;
  std::vector<Vec<N>> contact_points;
  std::vector<Vec<N>> evaluation_points;  // facet barycenters near contact
  std::vector<Estimate> fmc_at_contact;
  ProbeVerdict verdict = ProbeVerdict::NoContact;
};

namespace detail {

template <int N>
inline ProbeVerdict judge(const std::vector<Estimate>& values) {
  if (values.empty()) return ProbeVerdict::NoContact;
  for (const Estimate& e : values)
    if (e.sign_resolved()) return ProbeVerdict::ViolatesCriticality;
  return ProbeVerdict::ConsistentWithCritical;
}

}  // namespace detail

// Slides the hyperplane {x . axis = lambda} from -infinity (direction +1)
// or +infinity (direction -1) until first contact.  lambda_star is exact
// (an extremal vertex coordinate).  Curvature is evaluated at barycenters
// of contacted facets; contacts at boundary vertices are reported but not
// evaluated.
template <int N>
inline ContactReport<N> slide_hyperplane(const Hypersurface<N>& M,
                                         const Vec<N>& axis, int direction,
                                         const Params& params,
                                         const QuadratureSpec& spec) {
  ContactReport<N> report;
  const Vec<N> u = normalized(axis);
  double lambda = direction > 0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
  for (const auto& v : M.vertices) {
    const double c = dot(v, u);
    lambda = direction > 0 ? std::min(lambda, c) : std::max(lambda, c);
  }
  report.lambda_star = lambda;
  const double cluster = 1e-6 * M.diameter;

  std::set<int> contact_vertices;
  for (int i = 0; i < static_cast<int>(M.vertices.size()); ++i)
    if (std::abs(dot(M.vertices[i], u) - lambda) <= cluster)
      contact_vertices.insert(i);
  for (int v : contact_vertices) report.contact_points.push_back(M.vertices[v]);

  // Facets incident to the contact set; fully contacted facets contribute
  // their barycenter, partially contacted ones (isolated vertex touch) the
  // barycenters of the incident facets as nearby smooth stand-ins.  Touches
  // at boundary vertices are reported but never evaluated, mirroring the
  // restriction to interior touching points.
  std::set<int> boundary_vertices;
  for (const auto& ring : M.boundary)
    for (int v : ring) boundary_vertices.insert(v);
  std::set<int> eval_facets;
  for (int f = 0; f < M.facet_count(); ++f) {
    int touching = 0;
    int interior_touching = 0;
    for (int k = 0; k < N; ++k) {
      if (!contact_vertices.count(M.facets[f][k])) continue;
      ++touching;
      if (!boundary_vertices.count(M.facets[f][k])) ++interior_touching;
    }
    if (touching == N || interior_touching > 0) eval_facets.insert(f);
  }

  QuadratureSpec sp = spec;
  sp.resolve(M.diameter);
  int idx = 0;
  for (int f : eval_facets) {
    const Vec<N> z = M.facet_barycenter(f);
    if (M.boundary_distance(z) < sp.r_near) continue;  // boundary contact
    QuadratureSpec sp_f = sp;
    sp_f.seed = derive_seed(spec.seed, static_cast<uint64_t>(idx++));
    report.evaluation_points.push_back(z);
    report.fmc_at_contact.push_back(
        fmc_estimate<N>(M, z, M.facet_normals[f], params, sp_f));
  }
  report.verdict = detail::judge<N>(report.fmc_at_contact);
  return report;
}

// Slides a ball of the given radius along the line t -> t*axis + offset
// (offset = path_height on the last coordinate) and finds the first t with
// dist(center, M) = radius.
template <int N>
inline ContactReport<N> slide_ball(const Hypersurface<N>& M, double radius,
                                   double path_height, const Vec<N>& axis,
                                   const Params& params,
                                   const QuadratureSpec& spec) {
  if (!(radius > 0)) throw ConfigError("slide_ball needs radius > 0");
  ContactReport<N> report;
  const Vec<N> u = normalized(axis);
  Vec<N> offset{};
  offset[N - 1] = path_height;

  auto clearance = [&](double t) {
    const Vec<N> c = t * u + offset;
    double best = std::numeric_limits<double>::infinity();
    for (int f = 0; f < M.facet_count(); ++f)
      best = std::min(best, M.facet_dist2(f, c));
    return std::sqrt(best) - radius;
  };

  double t_lo = std::numeric_limits<double>::infinity();
  double t_hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : M.vertices) {
    const double c = dot(v, u);
    t_lo = std::min(t_lo, c);
    t_hi = std::max(t_hi, c);
  }
  t_lo -= radius + 0.25 * M.diameter;
  t_hi += radius + 0.25 * M.diameter;

  const int n_scan = 4096;
  double t_contact = std::numeric_limits<double>::quiet_NaN();
  double prev_t = t_lo, prev_f = clearance(t_lo);
  for (int i = 1; i <= n_scan; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / n_scan;
    const double f = clearance(t);
    if (prev_f > 0 && f <= 0) {
      double a = prev_t, b = t;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        (clearance(mid) > 0 ? a : b) = mid;
      }
      t_contact = 0.5 * (a + b);
      break;
    }
    prev_t = t;
    prev_f = f;
  }
  if (!std::isfinite(t_contact)) {
    report.verdict = ProbeVerdict::NoContact;
    return report;
  }
  report.lambda_star = t_contact;

  const Vec<N> center = t_contact * u + offset;
  const auto [facet, d] = M.nearest_facet(center);
  const Vec<N> z = M.facet_closest_point(facet, center);
  report.contact_points.push_back(z);

  QuadratureSpec sp = spec;
  sp.resolve(M.diameter);
  if (M.boundary_distance(z) >= sp.r_near) {
    QuadratureSpec sp_f = sp;
    sp_f.seed = derive_seed(spec.seed, 1);
    report.evaluation_points.push_back(z);
    report.fmc_at_contact.push_back(
        fmc_estimate<N>(M, z, M.facet_normals[facet], params, sp_f));
  }
  report.verdict = detail::judge<N>(report.fmc_at_contact);
  return report;
}

}  // namespace fracmc
