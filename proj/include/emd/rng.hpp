#pragma once

#include <cstdint>

namespace emd {

// Seed expander (splitmix64). Used only to fill the xoshiro state.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// xoshiro256++: the pinned generator behind every stochastic operation.
// Stream layout contract (relied on for bit-reproducible CSV output):
//   - construction from a 64-bit seed fills the state with four splitmix64 draws;
//   - uniform01() and below() consume exactly one 64-bit output each;
//   - callers document the order in which they draw.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit mantissa, one next() per call.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be > 0. One next() per call;
  // modulo bias is below 2^-53 for the bounds used here (< 2^11).
  uint64_t below(uint64_t bound) { return next() % bound; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4];
};

}  // namespace emd
