// Evaluates the fractional mean curvature along a branch of the planar cone
// C_d for a few slopes: d = 1 vanishes at regular points, other slopes carry
// a single sign.

#include <cstdio>

#include "fracmc/curvature.hpp"
#include "fracmc/shapes.hpp"

using namespace fracmc;

int main() {
  Params params;
  params.N = 2;
  params.s = 0.5;

  for (double d : {0.5, 1.0, 2.0}) {
    const auto cone = make_cone_2d(d);
    std::printf("C_%.1f:\n", d);
    for (const auto& pt : cone2d_regular_points(d, 2)) {
      QuadratureSpec spec;
      spec.n_samples = 400000;
      spec.seed = 42;
      const Estimate e = fmc_estimate<2>(cone, pt.z, pt.nu, params, spec);
      std::printf("  z=(%+.3f,%+.3f)  H = %+.4f +- %.4f\n", pt.z[0], pt.z[1],
                  e.value, e.half_width());
    }
  }
  return 0;
}
