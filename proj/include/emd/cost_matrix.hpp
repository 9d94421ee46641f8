#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "emd/matrix.hpp"

namespace emd {

// Symmetric ground-cost matrix with zero diagonal and non-negative entries.
// Asymmetric input is rejected: every metric handled here is symmetric.
class CostMatrix {
 public:
  explicit CostMatrix(SquareMatrix m) : m_(std::move(m)) { validate(); }

  CostMatrix(int n, std::vector<double> data) : m_(n, std::move(data)) { validate(); }

  int n() const { return m_.n(); }
  double at(int i, int j) const { return m_.at(i, j); }
  const SquareMatrix& matrix() const { return m_; }
  double max_entry() const;

 private:
  void validate() const;

  SquareMatrix m_;
};

// Transport plan; marginal agreement with (p, q) is the producer's contract,
// the container itself only stores the flows.
struct TransportPlan {
  SquareMatrix flows;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

// Frobenius inner product of plan and cost matrix.
double plan_cost(const TransportPlan& t, const CostMatrix& m);

}  // namespace emd
