#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace fracmc {

// Small fixed-dimension point/vector type. N is the ambient dimension
// (2 for planar curves, 3 for surfaces).
template <std::size_t N>
using Vec = std::array<double, N>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <std::size_t N>
inline Vec<N> operator+(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
inline Vec<N> operator-(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
inline Vec<N> operator*(double s, const Vec<N>& a) {
  Vec<N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
  return r;
}

template <std::size_t N>
inline Vec<N> operator-(const Vec<N>& a) {
  return -1.0 * a;
}

template <std::size_t N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
  double r = 0;
  for (std::size_t i = 0; i < N; ++i) r += a[i] * b[i];
  return r;
}

template <std::size_t N>
inline double norm2(const Vec<N>& a) {
  return dot(a, a);
}

template <std::size_t N>
inline double norm(const Vec<N>& a) {
  return std::sqrt(norm2(a));
}

template <std::size_t N>
inline double dist(const Vec<N>& a, const Vec<N>& b) {
  return norm(a - b);
}

template <std::size_t N>
inline Vec<N> normalized(const Vec<N>& a) {
  const double n = norm(a);
  return (1.0 / n) * a;
}

inline double cross2(const Vec2& a, const Vec2& b) {
  return a[0] * b[1] - a[1] * b[0];
}

inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return Vec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
              a[0] * b[1] - a[1] * b[0]};
}

// Counterclockwise quarter turn; the left-hand normal of a direction.
inline Vec2 rot90(const Vec2& a) { return Vec2{-a[1], a[0]}; }

// Reflection of v across the hyperplane with unit normal nu.
template <std::size_t N>
inline Vec<N> reflect(const Vec<N>& v, const Vec<N>& nu) {
  return v - (2.0 * dot(v, nu)) * nu;
}

template <std::size_t N>
struct Box {
  Vec<N> lo{};
  Vec<N> hi{};

  void expand(const Vec<N>& p) {
    for (std::size_t i = 0; i < N; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  static Box empty() {
    Box b;
    for (std::size_t i = 0; i < N; ++i) {
      b.lo[i] = std::numeric_limits<double>::infinity();
      b.hi[i] = -std::numeric_limits<double>::infinity();
    }
    return b;
  }
  Vec<N> center() const { return 0.5 * (lo + hi); }
  double diameter() const { return dist(lo, hi); }
  double volume() const {
    double v = 1;
    for (std::size_t i = 0; i < N; ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
  }
  bool contains(const Vec<N>& p) const {
    for (std::size_t i = 0; i < N; ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

// Measure of the unit sphere S^{N-1} in R^N.  omega(2) = 2*pi (circle),
// omega(3) = 4*pi.  omega(1) = 2 (two points, used as omega_{N-2} for N=2).
inline double unit_sphere_measure(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: return 0.0;
  }
}

// Volume of the unit ball B^{n} in R^n.
inline double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: return 0.0;
  }
}

}  // namespace fracmc
