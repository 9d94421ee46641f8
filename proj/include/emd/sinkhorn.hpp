#pragma once

#include <string>
#include <vector>

#include "emd/cost_matrix.hpp"
#include "emd/distribution.hpp"

namespace emd {

enum class Precision { binary32, binary64 };

const char* to_string(Precision p);
Precision precision_from_string(const std::string& s);  // "f32" | "f64"

struct SinkhornConfig {
  double lambda = 1.0;
  int max_iter = 1000;
  // Convergence: relative sup-norm change of the u scaling vector,
  // max|du| / max|u| < tol.
  double tol = 1e-9;
  Precision precision = Precision::binary64;
};

struct SinkhornResult {
  double distance = 0.0;                 // <M, T> of the regularized plan
  std::vector<double> subgradient;       // log(u) / lambda
  TransportPlan plan;                    // diag(u) * K * diag(v)
  int iterations = 0;
  bool converged = false;
  double marginal_error = 0.0;           // max deviation of plan marginals from p, q
  // Non-finite values appeared in u, v or K*v. The tainted result is reported
  // as computed (the stability sweeps record degeneracy, they don't hide it).
  bool numerically_degenerate = false;
  int clamped_entries = 0;               // negative plan entries clamped to 0
};

// Sinkhorn-Knopp distance and subgradient:
//   K = exp(-lambda*M - 1); u = 1
//   repeat u <- p ./ (K (q ./ K'u)) until converged or max_iter
//   v = q ./ (K'u); SD = sum(u .* ((K.*M) v)); grad = log(u)/lambda
// Every operation inside the loop, including the construction of K, runs in
// cfg.precision scalars; binary32 really computes in float rather than
// rounding double results. Requires strictly positive p and q (ZeroEntry
// otherwise; epsilon_smooth is the standard preconditioner).
SinkhornResult sinkhorn(const std::vector<double>& p, const std::vector<double>& q,
                        const CostMatrix& m, const SinkhornConfig& cfg);

// (d + eps) renormalized: strictly positive input for sinkhorn.
Distribution epsilon_smooth(const Distribution& d, double eps);

}  // namespace emd
