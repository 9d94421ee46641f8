#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emd/chain.hpp"
#include "emd/cost_matrix.hpp"
#include "emd/sinkhorn.hpp"

namespace emd {

// Sweep cells: every (precision, iter_cap, lambda) combination, evaluated in
// that nesting order.
struct SweepGrid {
  std::vector<double> lambdas;  // strictly increasing, positive
  std::vector<int> iter_caps;
  std::vector<Precision> precisions;
};

struct SweepRow {
  double lambda = 0.0;
  Precision precision = Precision::binary64;
  int iter_cap = 0;
  double sd = 0.0;
  double exact = 0.0;
  double ratio = 0.0;      // sd / exact; NaN when exact == 0
  double angle_deg = 0.0;  // cosine angle between the Sinkhorn and exact gradients
  bool converged = false;
  double marginal_err = 0.0;
  bool degenerate = false;
  bool failed = false;     // cell threw; message in error
  std::string error;
};

// Reference values the Sinkhorn cells are compared against. Use the
// closed-form rho=1 gradient when the matrix comes from a chain or tree;
// exact_reference_from_matrix is the finite-difference fallback for a bare
// cost matrix.
struct ExactReference {
  double value = 0.0;
  std::vector<double> grad;
};

ExactReference exact_reference_from_matrix(const std::vector<double>& p,
                                           const std::vector<double>& q, const CostMatrix& m);

// Angle in degrees between a and b after projecting both onto the zero-sum
// tangent space (mean subtracted: the Sinkhorn subgradient is only defined up
// to an additive constant). ZeroVector if a projection vanishes.
double cosine_angle(const std::vector<double>& a, const std::vector<double>& b);

// One Sinkhorn run per grid cell. Rows are ordered by grid index whatever the
// job count; a throwing cell is recorded as failed rather than aborting the
// sweep.
std::vector<SweepRow> run_lambda_sweep(const std::vector<double>& p, const std::vector<double>& q,
                                       const CostMatrix& m, const SweepGrid& grid,
                                       const ExactReference& exact, int jobs = 1);

// Header: lambda,precision,iter_cap,sd,exact,ratio,angle_deg,converged,marginal_err
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Per-bin gradient columns for the comparison plots: MSE gradient 2(p-q), the
// rho=1 and rho=2 chain gradients, and the Sinkhorn subgradient at each
// lambda. eps > 0 smooths p and q before the Sinkhorn columns only.
struct GradientProfiles {
  std::vector<double> lambdas;
  std::vector<double> mse;
  std::vector<double> emd1;
  std::vector<double> emd2;
  std::vector<std::vector<double>> sd;  // one column per lambda
};

GradientProfiles gradient_profiles(const std::vector<double>& p, const std::vector<double>& q,
                                   const ChainMetric& metric, const std::vector<double>& lambdas,
                                   double eps = 0.0);

void write_profiles_csv(std::ostream& out, const GradientProfiles& profiles);

// n log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace emd
