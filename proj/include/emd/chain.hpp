#pragma once

#include <vector>

#include "emd/cost_matrix.hpp"
#include "emd/errors.hpp"
#include "emd/matrix.hpp"

namespace emd {

// One-dimensional metric: consecutive-bin distances, N-1 positive costs for N bins.
class ChainMetric {
 public:
  explicit ChainMetric(std::vector<double> consecutive_costs);

  // All-ones metric, the common default.
  static ChainMetric unit(int n_bins);

  const std::vector<double>& consecutive_costs() const { return costs_; }
  int n_bins() const { return static_cast<int>(costs_.size()) + 1; }

 private:
  std::vector<double> costs_;
};

// Signed excess mass crossing each of the N-1 chain edges (prefix sums of p - q).
struct CumulativeFlow {
  std::vector<double> phi;
};

// Prefix sums of p - q. Accepts signed vectors as long as the total masses
// agree within kMassTol (descent iterates may dip below zero).
CumulativeFlow cumulative_flow(const std::vector<double>& p, const std::vector<double>& q);

// Relaxed one-dimensional EMD: sum_i cost_i * |phi_i|^rho. rho = 1 is the
// exact distance, rho = 2 the smooth relaxation.
double chain_emd(const std::vector<double>& p, const std::vector<double>& q,
                 const ChainMetric& metric, double rho);

// Mass-preserving gradient with respect to p, taken along the zero-sum
// directions e_k = (delta_jk - 1/N):
//   grad_k = rho * sum_i cost_i * sgn(phi_i)|phi_i|^{rho-1} * ([k <= i] - i/N).
// sgn(0) := 0, so for rho = 1 this is the zero subgradient at kinks and p = q
// stays a fixed point. The output sums to zero.
std::vector<double> chain_emd_grad(const std::vector<double>& p, const std::vector<double>& q,
                                   const ChainMetric& metric, double rho);

// Hessian of the rho = 2 distance, independent of p and q:
//   H_kl = 2 * sum_i cost_i * (N*[l <= i] - i) * (N*[k <= i] - i).
// Stated in the N-scaled zero-sum basis (entries N-1 and -1): it equals N^2
// times the second directional derivative along the e_k directions used by
// chain_emd_grad. Symmetric, rows sum to zero.
SquareMatrix chain_emd2_hessian(const ChainMetric& metric, int n);

// Dense bin-to-bin distances induced by the chain (prefix sums of costs).
CostMatrix to_cost_matrix(const ChainMetric& metric);

namespace detail {

// Evaluation without the mass gate, for the descent driver: its iterates
// accumulate bounded floating-point drift over thousands of epochs, and the
// driver measures that drift itself instead of aborting on it.
double chain_emd_drifting(const std::vector<double>& p, const std::vector<double>& q,
                          const ChainMetric& metric, double rho);
std::vector<double> chain_emd_grad_drifting(const std::vector<double>& p,
                                            const std::vector<double>& q,
                                            const ChainMetric& metric, double rho);

}  // namespace detail

}  // namespace emd
