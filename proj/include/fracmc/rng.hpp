#pragma once

#include <cstdint>

#include "fracmc/vec.hpp"

namespace fracmc {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11).  A draw is
// a pure function of (key, counter), so sample i of a run seeded with k is
// the same value no matter which thread computes it or in which order.

namespace detail {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  lo = static_cast<uint32_t>(p);
  hi = static_cast<uint32_t>(p >> 32);
}

struct PhiloxBlock {
  uint32_t v[4];
};

inline PhiloxBlock philox4x32(uint32_t c0, uint32_t c1, uint32_t c2,
                              uint32_t c3, uint32_t k0, uint32_t k1) {
  constexpr uint32_t kWeylA = 0x9E3779B9u;
  constexpr uint32_t kWeylB = 0xBB67AE85u;
  constexpr uint32_t kMulA = 0xD2511F53u;
  constexpr uint32_t kMulB = 0xCD9E8D57u;

  uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
  for (int round = 0; round < 10; ++round) {
    uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, x0, lo0, hi0);
    mulhilo(kMulB, x2, lo1, hi1);
    const uint32_t y0 = hi1 ^ x1 ^ k0;
    const uint32_t y1 = lo1;
    const uint32_t y2 = hi0 ^ x3 ^ k1;
    const uint32_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kWeylA;
    k1 += kWeylB;
  }
  return PhiloxBlock{{x0, x1, x2, x3}};
}

}  // namespace detail

// Stream of uniform variates keyed by (seed, sample_index).  Each Monte
// Carlo sample index owns its own stream; draws within the stream advance a
// block counter, so rejection/resampling never perturbs other samples.
class SampleStream {
 public:
  SampleStream(uint64_t seed, uint64_t sample_index)
      : k0_(static_cast<uint32_t>(seed)),
        k1_(static_cast<uint32_t>(seed >> 32)),
        c0_(static_cast<uint32_t>(sample_index)),
        c1_(static_cast<uint32_t>(sample_index >> 32)) {}

  uint64_t next_u64() {
    if (phase_ == 0) {
      block_ = detail::philox4x32(c0_, c1_, static_cast<uint32_t>(block_index_),
                                  static_cast<uint32_t>(block_index_ >> 32),
                                  k0_, k1_);
      ++block_index_;
      phase_ = 1;
      return (static_cast<uint64_t>(block_.v[1]) << 32) | block_.v[0];
    }
    phase_ = 0;
    return (static_cast<uint64_t>(block_.v[3]) << 32) | block_.v[2];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]; safe to pass through log() or pow(-1/s).
  double next_double_open0() { return 1.0 - next_double(); }

  // Uniform direction on the unit sphere S^{N-1}.
  template <int N>
  Vec<N> next_unit_vector();

 private:
  uint32_t k0_, k1_;
  uint32_t c0_, c1_;
  uint64_t block_index_ = 0;
  int phase_ = 0;
  detail::PhiloxBlock block_{};
};

template <>
inline Vec2 SampleStream::next_unit_vector<2>() {
  const double theta = 2.0 * M_PI * next_double();
  return Vec2{std::cos(theta), std::sin(theta)};
}

template <>
inline Vec3 SampleStream::next_unit_vector<3>() {
  // Archimedes: z uniform on [-1,1], azimuth uniform.
  const double z = 2.0 * next_double() - 1.0;
  const double theta = 2.0 * M_PI * next_double();
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3{rho * std::cos(theta), rho * std::sin(theta), z};
}

// Derives an independent 64-bit subkey.  Used to give flow vertices and
// scan points disjoint seed spaces (splitmix64 finalizer).
inline uint64_t derive_seed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace fracmc
