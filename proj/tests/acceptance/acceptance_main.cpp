// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails.  Runs at the sample counts fixed below; wall-clock is
// printed per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fracmc/fracmc.hpp"

#include "../oracles.hpp"

using namespace fracmc;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

std::vector<Criterion>& registry() {
  static std::vector<Criterion> r;
  return r;
}

#define CRITERION(id, title)                                        \
  static bool run_##id(std::string& detail);                        \
  static const bool reg_##id = [] {                                 \
    registry().push_back({title, run_##id});                        \
    return true;                                                    \
  }();                                                              \
  static bool run_##id(std::string& detail)

Params params_n(int N, double s) {
  Params p;
  p.N = N;
  p.s = s;
  return p;
}

std::string fmt_est(const Estimate& e) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.5g +- %.2g", e.value, e.half_width());
  return buf;
}

std::vector<oracle::Seg2> oracle_segs(const Hypersurface<2>& M) {
  std::vector<oracle::Seg2> out;
  for (int f = 0; f < M.facet_count(); ++f)
    out.push_back({M.facet_vertex(f, 0), M.facet_vertex(f, 1)});
  return out;
}

// ---------------------------------------------------------------------------
// 1. Flat-disk criticality: N=2 segment and N=3 disk,5 interior points each,
//    n = 1e6 pairs, intervals contain 0.
CRITERION(flat_disk, "1 flat-disk criticality (segment + 3d disk)") {
  QuadratureSpec spec;
  spec.n_samples = 1000000;
  spec.seed = 101;
  bool ok = true;
  const auto seg = make_flat_segment(1.0, 0.0, 10);
  for (int k = 0; k < 5; ++k) {
    const double x = -0.6 + 0.3 * k;
    const auto [f, d] = seg.nearest_facet({x, 0});
    const Vec2 z = seg.facet_barycenter(f);
    const Estimate e =
        fmc_estimate<2>(seg, z, seg.facet_normals[f], params_n(2, 0.5), spec);
    ok = ok && e.contains(0.0) && std::abs(e.value) <= e.half_width();
  }
  const auto disk = make_flat_disk_3d(1.0, 0.0, 64);
  for (int k = 0; k < 5; ++k) {
    const double ang = 0.4 + 1.1 * k;
    const Vec3 z{0.5 * std::cos(ang), 0.5 * std::sin(ang), 0.0};
    const Estimate e =
        fmc_estimate<3>(disk, z, {0, 0, 1}, params_n(3, 0.5), spec);
    ok = ok && e.contains(0.0) && std::abs(e.value) <= e.half_width();
  }
  detail = "10 interior points, all intervals contain 0";
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Symmetric cone vanishing: C_0 at 4 regular points, n = 2e6.
CRITERION(cone_vanish, "2 symmetric-cone vanishing (C_0)") {
  QuadratureSpec spec;
  spec.n_samples = 2000000;
  spec.seed = 202;
  const auto M = make_cone_2d(1.0);
  const auto pts = cone2d_regular_points(1.0, 1);
  bool ok = true;
  std::string vals;
  for (size_t k = 0; k < 4; ++k) {
    QuadratureSpec sp = spec;
    sp.seed = derive_seed(spec.seed, k);
    const Estimate e =
        fmc_estimate<2>(M, pts[k].z, pts[k].nu, params_n(2, 0.5), sp);
    ok = ok && e.contains(0.0);
    vals += fmt_est(e) + "; ";
  }
  detail = vals;
  return ok;
}

// Remaining criteria are appended as they are implemented.

}  // namespace

int main() {
  int failures = 0;
  for (const auto& c : registry()) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] %-55s (%.1fs) %s\n", ok ? "PASS" : "FAIL",
                c.name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
