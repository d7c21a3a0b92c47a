#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace fracmc {

// Global parameters: ambient dimension N, fractional order s in (0,1) and
// the normalization constant c_N.  The library fixes c_N = 1 by default;
// every sign/vanishing/connectedness statement it verifies is invariant
// under the choice of c_N > 0.
struct Params {
  int N = 2;
  double s = 0.5;
  double cN = 1.0;

  bool valid() const { return (N == 2 || N == 3) && s > 0 && s < 1 && cN > 0; }
};

// A numerical value with separated error channels: std_error is the Monte
// Carlo standard error (0 for deterministic quadrature), trunc_bound is a
// deterministic bound on everything that was cut off (far tail, excised
// near field, quadrature tolerance).  The reported confidence interval is
// value +/- half_width().
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double trunc_bound = 0.0;
  int64_t n_eval = 0;
  uint64_t seed = 0;

  double half_width() const { return 3.0 * std_error + trunc_bound; }
  double lower() const { return value - half_width(); }
  double upper() const { return value + half_width(); }
  bool contains(double x) const { return lower() <= x && x <= upper(); }
  bool overlaps(const Estimate& other) const {
    return lower() <= other.upper() && other.lower() <= upper();
  }
  // True when the interval excludes zero, i.e. the sign is resolved.
  bool sign_resolved() const { return std::abs(value) > half_width(); }
};

}  // namespace fracmc
