#include "emd/cost_matrix.hpp"

#include <cmath>
#include <string>

namespace emd {

void CostMatrix::validate() const {
  const int n = m_.n();
  for (int i = 0; i < n; ++i) {
    if (m_.at(i, i) != 0.0)
      raise(errc::bad_params, "cost matrix diagonal must be zero (row " + std::to_string(i) + ")");
    for (int j = 0; j < n; ++j) {
      const double v = m_.at(i, j);
      if (!std::isfinite(v) || v < 0.0)
        raise(errc::bad_params, "cost matrix entries must be finite and non-negative");
      const double w = m_.at(j, i);
      if (std::abs(v - w) > 1e-12 * std::max(1.0, std::abs(v)))
        raise(errc::bad_params, "cost matrix must be symmetric");
    }
  }
}

double CostMatrix::max_entry() const {
  double m = 0.0;
  for (double v : m_.data()) m = std::max(m, v);
  return m;
}

std::vector<double> TransportPlan::row_sums() const {
  const int n = flows.n();
  std::vector<double> s(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[i] += flows.at(i, j);
  return s;
}

std::vector<double> TransportPlan::col_sums() const {
  const int n = flows.n();
  std::vector<double> s(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[j] += flows.at(i, j);
  return s;
}

double plan_cost(const TransportPlan& t, const CostMatrix& m) {
  if (t.flows.n() != m.n()) raise(errc::shape_mismatch, "plan and cost matrix sizes differ");
  const int n = m.n();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) total += t.flows.at(i, j) * m.at(i, j);
  return total;
}

}  // namespace emd
