#pragma once

#include <vector>

#include "emd/cost_matrix.hpp"

namespace emd {

struct OracleResult {
  double value = 0.0;
  TransportPlan plan;
};

// Exact EMD by successive-shortest-path min-cost flow on the bipartite
// transport problem. Ground truth for the closed forms and Sinkhorn at small
// N; optimality is certified on the residual network (reduced costs >= -1e-12)
// before returning, so a buggy solve fails loudly instead of returning a
// plausible number. SolverFailure if the certificate does not hold.
//
// Requires non-negative p, q with equal total mass (kMassTol) and
// n <= max_size (TooLarge beyond the cap; this is an oracle, not a production
// solver).
OracleResult exact_emd(const std::vector<double>& p, const std::vector<double>& q,
                       const CostMatrix& m, int max_size = 256);

}  // namespace emd
