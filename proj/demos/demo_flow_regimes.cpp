// Runs the planar flow in the two boundary-separation regimes and prints the
// final connectivity: far rings disconnect into two caps, near rings end as
// two side arcs.

#include <cstdio>

#include "fracmc/flow.hpp"

using namespace fracmc;

int main() {
  Params params;
  params.N = 2;
  params.s = 0.5;

  for (double d : {4.0, 0.05}) {
    FlowConfig config;
    config.d = d;
    config.h_target = 0.1;
    config.n_samples = 20000;
    config.max_steps = 120;
    config.seed = 7;
    config.log_per_s = false;
    const FlowState init = d > 1 ? flow_initial_wall_chords(d, config.h_target)
                                 : flow_initial_two_sheets(d, config.h_target);
    const FlowResult res = flow_run(init, config, params);
    const ConnectivityReport rep = connectivity_report(res.final, d);
    std::printf("d=%.2f: %d component(s), min gap %.3f, attachments:", d,
                rep.n_components, rep.min_pair_distance);
    for (int mask : rep.boundary_attachment) std::printf(" %d", mask);
    std::printf("  [%s]\n", res.verdict == FlowVerdict::ConvergedCritical
                                ? "converged"
                                : "step budget");
  }
  return 0;
}
