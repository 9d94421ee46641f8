#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "emd/chain.hpp"
#include "emd/distribution.hpp"
#include "emd/rng.hpp"
#include "emd/tree.hpp"

namespace emd::test {

inline const char* data_dir() { return EMD_TEST_DATA_DIR; }

inline std::string data_path(const std::string& name) {
  return std::string(EMD_TEST_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// The 4-leaf animals/vehicles hierarchy used as the golden fixture.
inline MetricTree fixture_tree() { return load_tree(slurp(data_path("hierarchy.tree"))); }

inline std::vector<double> fixture_p() { return {0.2, 0.4, 0.2, 0.2}; }
inline std::vector<double> fixture_q() { return {0.0, 0.5, 0.5, 0.0}; }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Random unit-mass pair over n bins (strictly positive with probability 1).
inline std::pair<std::vector<double>, std::vector<double>> random_pair(int n, uint64_t seed) {
  const auto [p, q] = generate_pair({n, Setting::easy, seed});
  return {p.values(), q.values()};
}

inline ChainMetric random_chain(int n, uint64_t seed, double lo = 0.1, double hi = 2.0) {
  Xoshiro256pp rng(seed);
  std::vector<double> costs(n - 1);
  for (auto& c : costs) c = rng.uniform(lo, hi);
  return ChainMetric(costs);
}

// Projected central differences along the zero-sum directions
// e_k = (delta_jk - 1/N): the same tangent the analytic gradients use.
inline std::vector<double> projected_fd_gradient(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& p,
    double h = 1e-6) {
  const int n = static_cast<int>(p.size());
  std::vector<double> grad(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> hi = p, lo = p;
    for (int j = 0; j < n; ++j) {
      const double dir = (j == k ? 1.0 : 0.0) - 1.0 / n;
      hi[j] += h * dir;
      lo[j] -= h * dir;
    }
    grad[k] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return grad;
}

inline double relative_vector_error(const std::vector<double>& got,
                                    const std::vector<double>& want) {
  double diff = 0.0, scale = 0.0;
  for (size_t i = 0; i < got.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    scale = std::max(scale, std::abs(want[i]));
  }
  return diff / std::max(scale, 1e-30);
}

// Path-shaped tree whose spine carries the chain costs and whose bins hang off
// the spine as zero-cost leaves; structurally equivalent to the chain metric.
// Rooted at the far end so the subtree under spine node s_i collects bins
// 0..i, i.e. phi_tilde(s_i) is exactly the chain's cumulative flow phi_i.
inline MetricTree caterpillar_from_chain(const ChainMetric& metric) {
  const int n = metric.n_bins();
  std::vector<std::string> ids;
  std::vector<int> parent;
  std::vector<double> cost;
  for (int i = 0; i < n; ++i) {
    ids.push_back("s" + std::to_string(i));
    parent.push_back(i == n - 1 ? -1 : i + 1);
    cost.push_back(i == n - 1 ? 0.0 : metric.consecutive_costs()[i]);
  }
  for (int i = 0; i < n; ++i) {
    ids.push_back("b" + std::to_string(i));
    parent.push_back(i);
    cost.push_back(0.0);
  }
  return MetricTree(std::move(ids), std::move(parent), std::move(cost), true);
}

// Deterministic 32-leaf tree with a long costly spine: max leaf-to-leaf path
// 23.5, deep enough to drive float32 Sinkhorn into underflow well before
// float64.
inline MetricTree deep_tree32() {
  std::vector<std::string> ids;
  std::vector<int> parent;
  std::vector<double> cost;
  const int spine = 16;
  for (int i = 0; i < spine; ++i) {
    ids.push_back("s" + std::to_string(i));
    parent.push_back(i == 0 ? -1 : i - 1);
    cost.push_back(i == 0 ? 0.0 : 1.5);
  }
  for (int i = 0; i < spine; ++i) {
    for (int j = 0; j < 2; ++j) {
      ids.push_back("leaf" + std::to_string(i) + "_" + std::to_string(j));
      parent.push_back(i);
      cost.push_back(0.5);
    }
  }
  return MetricTree(std::move(ids), std::move(parent), std::move(cost));
}

}  // namespace emd::test
