#include "emd/distribution.hpp"

#include <cmath>
#include <string>

#include "emd/rng.hpp"

namespace emd {

Distribution::Distribution(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) raise(errc::bad_size, "a distribution needs at least 2 bins");
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0))
      raise(errc::negative_entry,
            "entry " + std::to_string(i) + " = " + std::to_string(values_[i]));
  }
}

double Distribution::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

Distribution normalize_l1(const Distribution& d) {
  const double s = d.sum();
  if (s == 0.0) raise(errc::zero_mass, "cannot normalize a zero-mass distribution");
  // Already at unit mass within the tolerance: pass through untouched, which
  // also makes normalization exactly idempotent.
  if (std::abs(s - 1.0) <= 1e-12) return d;
  std::vector<double> out = d.values();
  for (double& v : out) v /= s;
  return Distribution(std::move(out));
}

std::pair<Distribution, Distribution> generate_pair(const RandomInstanceSpec& spec) {
  if (spec.n_bins < 2) raise(errc::bad_size, "n_bins must be >= 2");
  if (spec.setting == Setting::hard && spec.n_bins % 2 != 0)
    raise(errc::odd_bins, "the hard setting needs an even bin count");

  Xoshiro256pp rng(spec.seed);
  const int n = spec.n_bins;
  std::vector<double> p(n), q(n);
  for (int i = 0; i < n; ++i) p[i] = rng.uniform01();
  for (int i = 0; i < n; ++i) q[i] = rng.uniform01();

  if (spec.setting == Setting::hard) {
    for (int i = n / 2; i < n; ++i) p[i] = 0.0;
    for (int i = 0; i < n / 2; ++i) q[i] = 0.0;
  }
  return {normalize_l1(Distribution(std::move(p))), normalize_l1(Distribution(std::move(q)))};
}

}  // namespace emd
