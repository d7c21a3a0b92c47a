#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "fracmc/curvature.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/fractional_area.hpp"
#include "fracmc/hypersurface.hpp"

namespace fracmc {

// Normal-variation descent flow for planar curves pinned at the rings
// Gamma_1 = {(-1,0),(1,0)} and Gamma_2 = {(-1,-d),(1,-d)}.  Interior
// vertices move with normal velocity equal to the fractional mean curvature
// (in this library's sign convention that is the descent direction for
// Per_s: a circle with outward normals has H < 0 and shrinks), then the
// curve is resampled to uniform spacing, clamped to the slab
// -d <= x2 <= 0, and checked for topology events: distinct components
// within merge distance are reconnected, self-pinches split off loops, and
// collapsed loops are removed.  The flow is an exploration tool: its
// terminal states are always re-audited with independent curvature
// estimates.

struct FlowConfig {
  double d = 1.0;
  double dt_safety = 0.5;      // in (0,1); dt = dt_safety * h_target^{1+s}
  double h_target = 0.05;
  int max_steps = 200;
  double stop_tol = 0.0;       // stop when sup |H| < stop_tol (0: never)
  double topology_merge_dist = 0.0;  // 0: h_target / 2
  uint64_t seed = 0;
  int64_t n_samples = 200000;  // antithetic pairs per facet evaluation
  double r_near = 0.0;         // 0: min(1e-3 diam, h_target/8)
  double R_far = 0.0;          // 0: 50 * diam
  int log_every = 10;
  bool log_per_s = true;
  int64_t n_samples_per_s = 100000;

  double dt(double s) const { return dt_safety * std::pow(h_target, 1.0 + s); }
  double merge_dist() const {
    return topology_merge_dist > 0 ? topology_merge_dist : 0.5 * h_target;
  }
};

struct FlowState {
  std::vector<std::vector<Vec2>> chains;  // open chains have pinned endpoints
  std::vector<bool> closed;
  double time = 0;
  int step_count = 0;
  std::vector<std::vector<double>> per_vertex_H;
  int clamped_last_step = 0;
  int topology_events = 0;
  double sup_H = 0;        // sup over vertices of |H| at the last step
  double sup_H_noise = 0;  // matching sup of 3*std_error + trunc

  bool valid() const {
    if (chains.empty()) return false;
    for (const auto& c : chains)
      if (c.size() < 2) return false;
    return true;
  }
};

enum class FlowVerdict { ConvergedCritical, MaxSteps, Degenerated };

struct FlowTraceRow {
  int step = 0;
  double time = 0;
  double sup_H = 0;
  int n_components = 0;
  double min_component_gap = 0;
  double min_wall_gap = 0;
  double per_s_estimate = 0;
};

struct FlowResult {
  FlowState final;
  std::vector<FlowTraceRow> trace;
  FlowVerdict verdict = FlowVerdict::MaxSteps;
};

struct ConnectivityReport {
  int n_components = 0;
  // For each component, which rings its pinned endpoints belong to:
  // bit 0 = Gamma_1 (x2 = 0), bit 1 = Gamma_2 (x2 = -d).
  std::vector<int> boundary_attachment;
  double min_pair_distance = std::numeric_limits<double>::infinity();
};

// ---------------------------------------------------------------------------

namespace flowdetail {

inline double chain_length(const std::vector<Vec2>& c, bool closed) {
  double L = 0;
  for (size_t i = 0; i + 1 < c.size(); ++i) L += dist(c[i], c[i + 1]);
  if (closed) L += dist(c.back(), c.front());
  return L;
}

// Arclength resampling to spacing near h; endpoints of open chains are kept
// exactly.
inline std::vector<Vec2> resample(const std::vector<Vec2>& c, bool closed,
                                  double h) {
  const double L = chain_length(c, closed);
  std::vector<Vec2> pts = c;
  if (closed) pts.push_back(c.front());
  const int n_seg = std::max(closed ? 3 : 1, static_cast<int>(std::lround(L / h)));
  std::vector<Vec2> out;
  out.reserve(n_seg + 1);
  double target = 0;
  const double step = L / n_seg;
  size_t seg = 0;
  double seg_start = 0;
  const int n_out = closed ? n_seg : n_seg + 1;
  for (int k = 0; k < n_out; ++k) {
    target = std::min(L, k * step);
    while (seg + 1 < pts.size() - 1 &&
           seg_start + dist(pts[seg], pts[seg + 1]) < target) {
      seg_start += dist(pts[seg], pts[seg + 1]);
      ++seg;
    }
    const double seg_len = dist(pts[seg], pts[seg + 1]);
    const double t = seg_len > 0 ? (target - seg_start) / seg_len : 0.0;
    out.push_back(pts[seg] + std::clamp(t, 0.0, 1.0) * (pts[seg + 1] - pts[seg]));
  }
  if (!closed) out.back() = c.back();
  return out;
}

struct PinchPair {
  size_t chain_a = 0, chain_b = 0;
  size_t idx_a = 0, idx_b = 0;
  double d = std::numeric_limits<double>::infinity();
};

// Closest vertex pair between distinct chains, and closest non-neighbor
// pair within a chain.  Pinned endpoints of open chains never participate:
// surgery must preserve the boundary rings.
inline PinchPair closest_inter(const FlowState& st) {
  PinchPair best;
  for (size_t a = 0; a < st.chains.size(); ++a)
    for (size_t b = a + 1; b < st.chains.size(); ++b) {
      const size_t ia0 = st.closed[a] ? 0 : 1;
      const size_t ia1 = st.chains[a].size() - (st.closed[a] ? 0 : 1);
      const size_t ib0 = st.closed[b] ? 0 : 1;
      const size_t ib1 = st.chains[b].size() - (st.closed[b] ? 0 : 1);
      for (size_t i = ia0; i < ia1; ++i)
        for (size_t j = ib0; j < ib1; ++j) {
          const double d = dist(st.chains[a][i], st.chains[b][j]);
          if (d < best.d) best = {a, b, i, j, d};
        }
    }
  return best;
}

inline PinchPair closest_self(const FlowState& st, int gap = 4) {
  PinchPair best;
  for (size_t a = 0; a < st.chains.size(); ++a) {
    const auto& c = st.chains[a];
    const size_t i0 = st.closed[a] ? 0 : 1;
    const size_t i1 = c.size() - (st.closed[a] ? 0 : 1);
    for (size_t i = i0; i < i1; ++i)
      for (size_t j = i + gap; j < i1; ++j) {
        if (st.closed[a] && i == 0 && j + 1 >= c.size()) continue;
        const double d = dist(c[i], c[j]);
        if (d < best.d) best = {a, a, i, j, d};
      }
  }
  return best;
}

}  // namespace flowdetail

// Exact connectivity of the polyline complex.
inline ConnectivityReport connectivity_report(const FlowState& state,
                                              double d) {
  if (!state.valid()) throw InvalidStateError("empty or degenerate flow state");
  ConnectivityReport rep;
  rep.n_components = static_cast<int>(state.chains.size());
  const double tol = 1e-9 * (1.0 + d);
  for (size_t a = 0; a < state.chains.size(); ++a) {
    int mask = 0;
    if (!state.closed[a]) {
      for (const Vec2& e : {state.chains[a].front(), state.chains[a].back()}) {
        if (std::abs(e[1]) < tol) mask |= 1;
        if (std::abs(e[1] + d) < tol) mask |= 2;
      }
    }
    rep.boundary_attachment.push_back(mask);
  }
  for (size_t a = 0; a < state.chains.size(); ++a)
    for (size_t b = a + 1; b < state.chains.size(); ++b)
      for (const Vec2& p : state.chains[a])
        for (const Vec2& q : state.chains[b])
          rep.min_pair_distance = std::min(rep.min_pair_distance, dist(p, q));
  return rep;
}

// Canned initial conditions.
inline FlowState flow_initial_two_sheets(double d, double h) {
  FlowState st;
  const int n = std::max(2, static_cast<int>(std::lround(2.0 / h)));
  std::vector<Vec2> top, bot;
  for (int i = 0; i <= n; ++i) {
    const double x = -1.0 + 2.0 * i / n;
    top.push_back({x, 0.0});
    bot.push_back({x, -d});
  }
  st.chains = {top, bot};
  st.closed = {false, false};
  return st;
}

inline FlowState flow_initial_wall_chords(double d, double h) {
  FlowState st;
  const int n = std::max(2, static_cast<int>(std::lround(d / h)));
  std::vector<Vec2> left, right;
  for (int i = 0; i <= n; ++i) {
    const double y = -d * i / n;
    left.push_back({-1.0, y});
    right.push_back({1.0, y});
  }
  st.chains = {left, right};
  st.closed = {false, false};
  return st;
}

inline FlowState flow_initial_cone(double d, double h) {
  FlowState st;
  const int n = std::max(2, static_cast<int>(std::lround(std::hypot(1.0, d) / h)));
  auto seg = [&](Vec2 a, Vec2 b) {
    std::vector<Vec2> c;
    for (int i = 0; i <= n; ++i) c.push_back(a + (static_cast<double>(i) / n) * (b - a));
    return c;
  };
  // X-shaped cone scaled into the slab [-d, 0]: vertex at (0, -d/2).
  const Vec2 mid{0.0, -0.5 * d};
  std::vector<Vec2> c1 = seg({-1.0, 0.0}, mid);
  std::vector<Vec2> c1b = seg(mid, {1.0, -d});
  c1.insert(c1.end(), c1b.begin() + 1, c1b.end());
  std::vector<Vec2> c2 = seg({1.0, 0.0}, mid);
  std::vector<Vec2> c2b = seg(mid, {-1.0, -d});
  c2.insert(c2.end(), c2b.begin() + 1, c2b.end());
  // Shift the two chains apart by a hair so they do not intersect.
  for (auto& p : c1) p[0] -= 1e-6;
  for (auto& p : c2) p[0] += 1e-6;
  st.chains = {c1, c2};
  st.closed = {false, false};
  return st;
}

namespace flowdetail {

struct FacetEval {
  double H = 0;
  double noise = 0;
};

// Curvature at every facet midpoint of the assembled surface.
inline std::vector<FacetEval> facet_curvatures(const Hypersurface<2>& M,
                                               const Params& params,
                                               const FlowConfig& config,
                                               int step) {
  std::vector<FacetEval> out(M.facet_count());
  const double r_near_base =
      config.r_near > 0 ? config.r_near
                        : std::min(1e-3 * M.diameter, config.h_target / 8.0);
  const double R_far = config.R_far > 0 ? config.R_far : 50.0 * M.diameter;
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex error_mutex;
  parallel_for(M.facet_count(), [&](int64_t f) {
    if (failed.load(std::memory_order_relaxed)) return;
    const Vec2 z = M.facet_barycenter(static_cast<int>(f));
    QuadratureSpec sp;
    sp.n_samples = config.n_samples;
    sp.R_far = R_far;
    sp.r_near = std::min(r_near_base, 0.5 * M.boundary_distance(z));
    if (!(sp.r_near > 0)) sp.r_near = 0.25 * M.facet_measure(static_cast<int>(f));
    sp.seed = derive_seed(config.seed,
                          (static_cast<uint64_t>(step) << 24) ^
                              static_cast<uint64_t>(f));
    try {
      const Estimate e = fmc_estimate<2>(M, z, M.facet_normals[static_cast<int>(f)],
                                      params, sp);
      out[static_cast<size_t>(f)] = {e.value, e.half_width()};
    } catch (const Error& err) {
      std::scoped_lock lk(error_mutex);
      error_msg = err.what();
      failed.store(true, std::memory_order_relaxed);
    }
  });
  if (failed.load()) throw NonConvergentError("facet curvature failed: " + error_msg);
  return out;
}

}  // namespace flowdetail

// One explicit step: move, resample, clamp, handle topology events.
inline FlowState flow_step(const FlowState& state, const FlowConfig& config,
                           const Params& params, double dt_override = 0) {
  if (!state.valid()) throw InvalidStateError("invalid flow state");
  const double dt = dt_override > 0 ? dt_override : config.dt(params.s);

  // Assemble the current surface; facet indexing follows chain order.
  Hypersurface<2> M = build_polyline_multi(state.chains, state.closed);
  const std::vector<flowdetail::FacetEval> facet_H =
      flowdetail::facet_curvatures(M, params, config, state.step_count);

  FlowState next = state;
  next.per_vertex_H.assign(state.chains.size(), {});
  next.sup_H = 0;
  next.sup_H_noise = 0;

  size_t facet_base = 0;
  for (size_t c = 0; c < state.chains.size(); ++c) {
    const auto& chain = state.chains[c];
    const bool closed = state.closed[c];
    const size_t n_vert = chain.size();
    const size_t n_seg = n_vert - (closed ? 0 : 1);
    auto seg_eval = [&](size_t i) { return facet_H[facet_base + i]; };
    auto seg_normal = [&](size_t i) {
      return M.facet_normals[static_cast<int>(facet_base + i)];
    };
    std::vector<double> Hv(n_vert, 0.0);
    std::vector<Vec2> moved = chain;
    for (size_t v = 0; v < n_vert; ++v) {
      const bool pinned = !closed && (v == 0 || v + 1 == n_vert);
      // Adjacent segments of vertex v.
      std::vector<size_t> segs;
      if (closed) {
        segs = {(v + n_seg - 1) % n_seg, v % n_seg};
      } else {
        if (v > 0) segs.push_back(v - 1);
        if (v < n_seg) segs.push_back(v);
      }
      double H = 0, noise = 0;
      Vec2 nu{0, 0};
      for (size_t sgi : segs) {
        H += seg_eval(sgi).H;
        noise += seg_eval(sgi).noise;
        nu = nu + seg_normal(sgi);
      }
      H /= static_cast<double>(segs.size());
      noise /= static_cast<double>(segs.size());
      Hv[v] = H;
      if (!pinned) {
        next.sup_H = std::max(next.sup_H, std::abs(H));
        next.sup_H_noise = std::max(next.sup_H_noise, noise);
        if (std::abs(H) - noise > 1.0 / dt)
          throw StepRejectedError("curvature magnitude exceeds 1/dt");
        // Displacement cap: a vertex may not travel more than a fraction of
        // the spacing per step, or approaching sheets would tunnel through
        // each other between surgery checks.
        if (std::abs(H) * dt > 0.2 * config.h_target)
          throw StepRejectedError("displacement exceeds h_target/5");
        const double nn = norm(nu);
        if (nn > 1e-12) {
          nu = (1.0 / nn) * nu;
          moved[v] = moved[v] + (dt * H) * nu;
        }
      }
    }
    next.per_vertex_H[c] = Hv;
    next.chains[c] = moved;
    facet_base += n_seg;
  }

  // Slab clamp.
  next.clamped_last_step = 0;
  for (size_t c = 0; c < next.chains.size(); ++c) {
    for (size_t v = 0; v < next.chains[c].size(); ++v) {
      const bool pinned =
          !next.closed[c] && (v == 0 || v + 1 == next.chains[c].size());
      if (pinned) continue;
      double& y = next.chains[c][v][1];
      const double clamped = std::clamp(y, -config.d, 0.0);
      if (clamped != y) {
        y = clamped;
        ++next.clamped_last_step;
      }
    }
  }

  // Resample to the target spacing.
  for (size_t c = 0; c < next.chains.size(); ++c)
    next.chains[c] =
        flowdetail::resample(next.chains[c], next.closed[c], config.h_target);

  // Topology events: reconnect approaching components, split self-pinches,
  // drop collapsed loops.
  const double merge_dist = config.merge_dist();
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    const flowdetail::PinchPair inter = flowdetail::closest_inter(next);
    if (inter.d < merge_dist) {
      const auto A = next.chains[inter.chain_a];
      const auto B = next.chains[inter.chain_b];
      const bool closed_a = next.closed[inter.chain_a];
      const bool closed_b = next.closed[inter.chain_b];
      const size_t i = inter.idx_a, j = inter.idx_b;
      std::vector<std::vector<Vec2>> new_chains;
      std::vector<bool> new_closed;
      if (!closed_a && !closed_b) {
        // Two pairings; keep the one with shorter new edges.
        auto len_pairing1 = dist(A[i], B[j]) +
                            ((i + 1 < A.size() && j + 1 < B.size())
                                 ? dist(A[i + 1], B[j + 1])
                                 : 1e300);
        auto len_pairing2 =
            ((j + 1 < B.size()) ? dist(A[i], B[j + 1]) : 1e300) +
            ((i + 1 < A.size()) ? dist(A[i + 1], B[j]) : 1e300);
        std::vector<Vec2> c1, c2;
        if (len_pairing1 <= len_pairing2) {
          // a0..ai + bj..b0  and  bq..b_{j+1} + a_{i+1}..ap
          c1.assign(A.begin(), A.begin() + i + 1);
          for (size_t k = j + 1; k-- > 0;) c1.push_back(B[k]);
          for (size_t k = B.size(); k-- > j + 1;) c2.push_back(B[k]);
          c2.insert(c2.end(), A.begin() + i + 1, A.end());
        } else {
          // a0..ai + b_{j+1}..bq  and  b0..bj + a_{i+1}..ap
          c1.assign(A.begin(), A.begin() + i + 1);
          c1.insert(c1.end(), B.begin() + j + 1, B.end());
          c2.assign(B.begin(), B.begin() + j + 1);
          c2.insert(c2.end(), A.begin() + i + 1, A.end());
        }
        for (size_t c = 0; c < next.chains.size(); ++c) {
          if (c == inter.chain_a || c == inter.chain_b) continue;
          new_chains.push_back(next.chains[c]);
          new_closed.push_back(next.closed[c]);
        }
        if (c1.size() >= 2) {
          new_chains.push_back(c1);
          new_closed.push_back(false);
        }
        if (c2.size() >= 2) {
          new_chains.push_back(c2);
          new_closed.push_back(false);
        }
        next.chains = new_chains;
        next.closed = new_closed;
        ++next.topology_events;
        changed = true;
      }
      // Mergers involving closed loops are left to loop shrinkage.
    }
    if (!changed) {
      const flowdetail::PinchPair self = flowdetail::closest_self(next);
      if (self.d < merge_dist) {
        const auto C = next.chains[self.chain_a];
        const size_t i = self.idx_a, j = self.idx_b;
        std::vector<Vec2> open_part(C.begin(), C.begin() + i + 1);
        open_part.insert(open_part.end(), C.begin() + j, C.end());
        std::vector<Vec2> loop(C.begin() + i, C.begin() + j + 1);
        next.chains[self.chain_a] = open_part;
        if (flowdetail::chain_length(loop, true) > 4 * config.h_target) {
          next.chains.push_back(loop);
          next.closed.push_back(true);
        }
        ++next.topology_events;
        changed = true;
      }
    }
    if (!changed) break;
    // Resample affected chains so spacing stays uniform after surgery.
    for (size_t c = 0; c < next.chains.size(); ++c)
      next.chains[c] =
          flowdetail::resample(next.chains[c], next.closed[c], config.h_target);
  }

  // Drop collapsed loops.
  for (size_t c = next.chains.size(); c-- > 0;) {
    if (next.closed[c] &&
        flowdetail::chain_length(next.chains[c], true) < 4 * config.h_target) {
      next.chains.erase(next.chains.begin() + c);
      next.closed.erase(next.closed.begin() + c);
      ++next.topology_events;
    }
  }

  next.time = state.time + dt;
  next.step_count = state.step_count + 1;
  return next;
}

// Runs the flow to sup|H| < stop_tol or max_steps, logging a trace row every
// log_every steps.  StepRejected restarts the step with halved dt.
inline FlowResult flow_run(const FlowState& initial, const FlowConfig& config,
                           const Params& params) {
  FlowResult result;
  FlowState st = initial;
  const Box<2> omega_box{Vec2{-3.0, -config.d - 2.0}, Vec2{3.0, 2.0}};
  const Domain<2> omega = Domain<2>::box_region(omega_box);

  auto log_row = [&](const FlowState& s) {
    FlowTraceRow row;
    row.step = s.step_count;
    row.time = s.time;
    row.sup_H = s.sup_H;
    const ConnectivityReport rep = connectivity_report(s, config.d);
    row.n_components = rep.n_components;
    row.min_component_gap = rep.min_pair_distance;
    double wall = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < s.chains.size(); ++c)
      for (size_t v = 0; v < s.chains[c].size(); ++v) {
        const bool pinned =
            !s.closed[c] && (v == 0 || v + 1 == s.chains[c].size());
        if (pinned) continue;
        wall = std::min(wall, 1.0 - std::abs(s.chains[c][v][0]));
      }
    row.min_wall_gap = wall;
    if (config.log_per_s) {
      try {
        const Hypersurface<2> M = build_polyline_multi(s.chains, s.closed);
        Params p = params;
        QuadratureSpec sp;
        sp.n_samples = config.n_samples_per_s;
        sp.seed = derive_seed(config.seed, 0xA5A5A5A5ull ^ s.step_count);
        row.per_s_estimate = per_s_estimate(M, omega, p, sp).value;
      } catch (const Error&) {
        row.per_s_estimate = std::numeric_limits<double>::quiet_NaN();
      }
    }
    result.trace.push_back(row);
  };

  int last_logged = -1;
  // Rejected steps halve dt; accepted steps let it creep back toward the
  // configured value, so a stiff transient does not re-reject every step.
  double dt_cur = config.dt(params.s);
  for (int k = 0; k < config.max_steps; ++k) {
    double dt = std::min(config.dt(params.s), 2.0 * dt_cur);
    bool stepped = false;
    for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
      try {
        FlowState nxt = flow_step(st, config, params, dt);
        st = nxt;
        stepped = true;
        dt_cur = dt;
      } catch (const StepRejectedError&) {
        dt *= 0.5;
      } catch (const Error&) {
        result.final = st;
        result.verdict = FlowVerdict::Degenerated;
        return result;
      }
    }
    if (!stepped || !st.valid()) {
      result.final = st;
      result.verdict = FlowVerdict::Degenerated;
      return result;
    }
    if (st.step_count % std::max(1, config.log_every) == 0 || k == 0) {
      log_row(st);
      last_logged = st.step_count;
    }
    if (config.stop_tol > 0 && st.sup_H < config.stop_tol) {
      result.verdict = FlowVerdict::ConvergedCritical;
      break;
    }
  }
  if (st.step_count != last_logged) log_row(st);
  result.final = st;
  if (result.verdict != FlowVerdict::ConvergedCritical)
    result.verdict = FlowVerdict::MaxSteps;
  return result;
}

}  // namespace fracmc
