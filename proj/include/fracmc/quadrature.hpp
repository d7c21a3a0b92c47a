#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace fracmc {

// Adaptive Gauss-Kronrod 7/15 on finite intervals.  Bisects until the
// embedded error estimate meets abs/rel tolerance; endpoint singularities
// are expected to be removed by substitution at the call site.

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // accumulated error estimate
  int64_t n_eval = 0;
};

namespace detail {

struct GK15 {
  // Kronrod abscissae on [0,1] side (symmetric), Kronrod and Gauss weights.
  static constexpr int n = 8;
  static constexpr double xk[n] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769,
      0.741531185599394, 0.586087235467691, 0.405845151377397,
      0.207784955007898, 0.000000000000000};
  static constexpr double wk[n] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250,
      0.140653259715525, 0.169004726639267, 0.190350578064785,
      0.204432940075298, 0.209482141084728};
  static constexpr double wg[4] = {0.129484966168870, 0.279705391489277,
                                   0.381830050505119, 0.417959183673469};
};

template <typename F>
inline void gk15_panel(const F& f, double a, double b, double& value,
                       double& error, int64_t& n_eval) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  // Evaluate symmetric node pairs; the last entry is the center node.
  double sum_k = 0.0;
  double sum_g = 0.0;
  for (int i = 0; i < GK15::n; ++i) {
    if (i == GK15::n - 1) {
      const double fc = f(c);
      sum_k += GK15::wk[i] * fc;
      sum_g += GK15::wg[3] * fc;
      n_eval += 1;
    } else {
      const double f1 = f(c - h * GK15::xk[i]);
      const double f2 = f(c + h * GK15::xk[i]);
      sum_k += GK15::wk[i] * (f1 + f2);
      if (i % 2 == 1) sum_g += GK15::wg[i / 2] * (f1 + f2);
      n_eval += 2;
    }
  }
  value = sum_k * h;
  const double g = sum_g * h;
  error = std::abs(value - g);
}

}  // namespace detail

template <typename F>
inline QuadResult integrate_adaptive(const F& f, double a, double b,
                                     double abs_tol = 1e-12,
                                     double rel_tol = 1e-10,
                                     int max_intervals = 20000) {
  QuadResult out;
  if (a == b) return out;

  struct Seg {
    double a, b, value, error;
  };
  std::vector<Seg> heap;
  double v0, e0;
  detail::gk15_panel(f, a, b, v0, e0, out.n_eval);
  heap.push_back({a, b, v0, e0});
  double total_v = v0, total_e = e0;

  while (total_e > std::max(abs_tol, rel_tol * std::abs(total_v)) &&
         static_cast<int>(heap.size()) < max_intervals) {
    // Split the segment with the largest error.
    size_t worst = 0;
    for (size_t i = 1; i < heap.size(); ++i)
      if (heap[i].error > heap[worst].error) worst = i;
    const Seg seg = heap[worst];
    const double mid = 0.5 * (seg.a + seg.b);
    if (mid <= seg.a || mid >= seg.b) break;  // interval at double resolution
    Seg left, right;
    left.a = seg.a;
    left.b = mid;
    right.a = mid;
    right.b = seg.b;
    detail::gk15_panel(f, left.a, left.b, left.value, left.error, out.n_eval);
    detail::gk15_panel(f, right.a, right.b, right.value, right.error,
                       out.n_eval);
    total_v += left.value + right.value - seg.value;
    total_e += left.error + right.error - seg.error;
    heap[worst] = left;
    heap.push_back(right);
  }

  // Recompute the totals in a fixed order for reproducibility.
  total_v = 0;
  total_e = 0;
  for (const Seg& s : heap) {
    total_v += s.value;
    total_e += s.error;
  }
  out.value = total_v;
  out.error = total_e;
  return out;
}

// Integrates f over [a,b] after splitting at the given interior breakpoints
// (kinks of piecewise-smooth integrands).
template <typename F>
inline QuadResult integrate_piecewise(const F& f, double a, double b,
                                      const std::vector<double>& breaks,
                                      double abs_tol = 1e-12,
                                      double rel_tol = 1e-10) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double t : breaks)
    if (t > a && t < b) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  QuadResult out;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const QuadResult piece =
        integrate_adaptive(f, pts[i], pts[i + 1], abs_tol, rel_tol);
    out.value += piece.value;
    out.error += piece.error;
    out.n_eval += piece.n_eval;
  }
  return out;
}

}  // namespace fracmc
