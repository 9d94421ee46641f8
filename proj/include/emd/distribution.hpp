#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "emd/errors.hpp"

namespace emd {

// Two distributions are considered to carry equal mass when their sums agree
// within this tolerance; kernels reject anything worse instead of silently
// renormalizing.
inline constexpr double kMassTol = 1e-9;

// Non-negative mass vector over N >= 2 bins (chains) or leaves (trees).
// Immutable after construction.
class Distribution {
 public:
  explicit Distribution(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double sum() const;

 private:
  std::vector<double> values_;
};

enum class Setting { easy, hard };

// Deterministic description of a random (p, q) test instance.
struct RandomInstanceSpec {
  int n_bins = 64;
  Setting setting = Setting::easy;
  uint64_t seed = 0;
};

// Scale to unit total mass. Errors: ZeroMass, NegativeEntry.
Distribution normalize_l1(const Distribution& d);

// Draw a deterministic (p, q) pair. The generator consumes exactly 2*n_bins
// uniforms: p's entries in bin order, then q's. In the hard setting the right
// half of p and the left half of q are zeroed before normalization, so the
// supports are disjoint and all mass has to cross the midpoint.
std::pair<Distribution, Distribution> generate_pair(const RandomInstanceSpec& spec);

}  // namespace emd
