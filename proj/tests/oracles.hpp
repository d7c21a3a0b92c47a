#pragma once

// Test-side oracles, deliberately independent of the library's crossing and
// sampling machinery: plain ray/segment arithmetic, exact radial integrals,
// and brute-force refinement quadrature.  These pin the expected values the
// Monte Carlo estimators are tested against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fracmc/quadrature.hpp"
#include "fracmc/vec.hpp"

namespace oracle {

using fracmc::Vec2;

struct Seg2 {
  Vec2 a, b;
};

// All crossing parameters r > r_min of the ray z + r u with the segment set.
inline std::vector<double> ray_hits(const Vec2& z, const Vec2& u,
                                    const std::vector<Seg2>& segs,
                                    double r_min = 1e-12) {
  std::vector<double> out;
  for (const auto& s : segs) {
    const Vec2 e{s.b[0] - s.a[0], s.b[1] - s.a[1]};
    const double denom = u[0] * e[1] - u[1] * e[0];
    if (denom == 0.0) continue;
    const Vec2 w{s.a[0] - z[0], s.a[1] - z[1]};
    const double r = (w[0] * e[1] - w[1] * e[0]) / denom;
    const double t = (w[0] * u[1] - w[1] * u[0]) / denom;
    if (r > r_min && t >= 0.0 && t <= 1.0) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Deterministic fractional mean curvature of a planar segment complex at an
// on-surface point z with normal nu:
//
//   H(z) = int_0^pi h(theta) dtheta,
//   h = sum over the two opposite rays of the exact radial integral of
//       (chi_Ai - chi_Ae) r^{-1-s} between consecutive crossings.
//
// The first interval of the merged two-ray breakpoint list always carries
// opposite labels and cancels, which is the principal value.
inline double fmc_polar_2d(const std::vector<Seg2>& segs, const Vec2& z,
                           const Vec2& nu, double s,
                           const std::vector<double>& theta_breaks = {},
                           double rel_tol = 1e-9) {
  auto ray_label0 = [&](const Vec2& u) {
    // Label of points y = z + r u for r -> 0+:  (z-y).nu = -r u.nu, no
    // crossings, so Interior iff u.nu < 0.
    return (u[0] * nu[0] + u[1] * nu[1]) < 0 ? 1.0 : -1.0;
  };
  auto h = [&](double theta) {
    const Vec2 u{std::cos(theta), std::sin(theta)};
    const Vec2 v{-u[0], -u[1]};
    const std::vector<double> hu = ray_hits(z, u, segs);
    const std::vector<double> hv = ray_hits(z, v, segs);
    // Merge breakpoints; track both ray labels on each interval.
    std::vector<std::pair<double, int>> events;  // (r, which ray flips)
    for (double r : hu) events.push_back({r, 0});
    for (double r : hv) events.push_back({r, 1});
    std::sort(events.begin(), events.end());
    double lab[2] = {ray_label0(u), ray_label0(v)};
    double total = 0.0;
    double r_prev = 0.0;
    for (size_t k = 0; k <= events.size(); ++k) {
      const double r_next =
          k < events.size() ? events[k].first : std::numeric_limits<double>::infinity();
      const double pair_label = lab[0] + lab[1];
      if (pair_label != 0.0 && r_prev > 0.0) {
        const double tail = std::isinf(r_next) ? 0.0 : std::pow(r_next, -s);
        total += pair_label * (std::pow(r_prev, -s) - tail) / s;
      }
      if (k < events.size()) {
        lab[events[k].second] = -lab[events[k].second];
        r_prev = r_next;
      }
    }
    return total;
  };
  std::vector<double> breaks = theta_breaks;
  const auto res = fracmc::integrate_piecewise(h, 0.0, M_PI, breaks, 1e-12,
                                               rel_tol);
  return res.value;
}

// Collect the facet segments of a polyline-type surface together with the
// directions (angles mod pi) from z toward every endpoint; those are the
// kink directions of the polar integrand.
inline std::vector<double> vertex_angles(const std::vector<Seg2>& segs,
                                         const Vec2& z) {
  std::vector<double> out;
  for (const auto& s : segs) {
    for (const Vec2& p : {s.a, s.b}) {
      const double dx = p[0] - z[0], dy = p[1] - z[1];
      if (dx == 0 && dy == 0) continue;
      double a = std::atan2(dy, dx);
      if (a < 0) a += M_PI;
      if (a >= M_PI) a -= M_PI;
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Deterministic classical fractional perimeter P_s(B_rho; B_R) in the plane
// for rho < R: single-term integral over x in the disk of the exact exit-ray
// tail integral.
inline double ps_disk_oracle(double rho, double R, double s,
                             double rel_tol = 1e-8) {
  (void)R;  // E = B_rho lies inside Omega = B_R: second term vanishes.
  auto g = [&](double a) {
    // int_{B_rho^c} |x-y|^{-2-s} dy for |x| = a < rho, via the exit radius
    // along each direction.
    auto integrand = [&](double phi) {
      const double c = std::cos(phi);
      const double exit =
          -a * c + std::sqrt(std::max(0.0, rho * rho - a * a * (1 - c * c)));
      return std::pow(exit, -s) / s;
    };
    return 2.0 * fracmc::integrate_adaptive(integrand, 0.0, M_PI, 1e-12,
                                            rel_tol * 0.1)
                     .value;
  };
  // P = int_0^rho 2 pi a g(a) da; g ~ (rho-a)^{-s} near the rim, so
  // substitute a = rho - v^{1/(1-s)}.
  const double p = 1.0 / (1.0 - s);
  auto outer = [&](double v) {
    const double a = rho - std::pow(v, p);
    if (a <= 0) return 0.0;
    return 2.0 * M_PI * a * g(a) * p * std::pow(v, p - 1.0);
  };
  return fracmc::integrate_adaptive(outer, 0.0, std::pow(rho, 1.0 - s), 1e-10,
                                    rel_tol)
      .value;
}

// Brute-force composite Simpson with step halving, the independent check on
// the adaptive F integral.
inline double simpson_refine(const std::function<double(double)>& f, double a,
                             double b, double tol = 1e-12) {
  auto simpson = [&](int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  double prev = simpson(16);
  for (int n = 32; n <= (1 << 22); n *= 2) {
    const double cur = simpson(n);
    if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

// Even-odd point-in-polygon (independent of the library's region code).
inline bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  bool in = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((poly[i][1] > p[1]) != (poly[j][1] > p[1]) &&
        p[0] < (poly[j][0] - poly[i][0]) * (p[1] - poly[i][1]) /
                       (poly[j][1] - poly[i][1]) +
                   poly[i][0])
      in = !in;
  }
  return in;
}

}  // namespace oracle
