#pragma once

#include <cstdint>
#include <vector>

#include "emd/chain.hpp"
#include "emd/distribution.hpp"
#include "emd/tree.hpp"

namespace emd {

enum class DescentLoss { emd_rho1, emd_rho2 };

// Defaults mirror the toy experiment: 64 bins, unit costs, lambda0 = 2^20,
// sqrt(2) line-search scaling, 2000 epochs, 64 runs.
struct DescentConfig {
  DescentLoss loss = DescentLoss::emd_rho2;
  double initial_rate = 1048576.0;  // 2^20
  double backtrack_factor = 1.4142135623730951;
  int epochs = 2000;
  double rate_floor = 0x1p-60;
  double rate_ceiling = 0x1p60;
};

struct DescentRecord {
  double emd_error = 0.0;     // rho=1 distance to the target
  double learning_rate = 0.0;
  double total_mass = 0.0;
  double min_entry = 0.0;     // steps may push entries negative; recorded, not projected
  double loss_value = 0.0;    // the descended EMD^rho itself
};

struct DescentTrace {
  // records[0] is the initial state, records[t] the state after epoch t.
  std::vector<DescentRecord> records;
  int stalls = 0;           // rate pinned at the floor without an acceptable step
  int ceiling_hits = 0;     // rate growth clipped at the ceiling
  bool non_finite = false;  // iterate left the finite range; run terminated there
};

// Gradient descent p <- p - rate * grad(EMD^rho), rate adapted by the
// backtrack factor.
//
// The two losses get the treatment their structure demands. The smooth rho=2
// loss uses a backtracking line search: the largest ladder rate whose step
// does not increase the loss is taken, rejected steps are undone, and an epoch
// with no acceptable step down to the rate floor is a stall. The rho=1 loss
// only yields a subgradient, for which rejection-based search is meaningless;
// its step is always applied (skipped only if non-finite) and the rate grows
// on improvement, shrinks otherwise. That asymmetry is what the experiment
// measures: the squared loss descends steadily while rho=1 bounces without
// converging.
DescentTrace run_descent(const std::vector<double>& p0, const std::vector<double>& q,
                         const ChainMetric& metric, const DescentConfig& cfg);
DescentTrace run_descent(const std::vector<double>& p0, const std::vector<double>& q,
                         const MetricTree& tree, const DescentConfig& cfg);

struct BatchResult {
  std::vector<DescentTrace> runs;        // seeds seed, seed+1, ..., seed+runs-1
  std::vector<DescentRecord> mean;       // per-epoch arithmetic mean over included runs
  std::vector<uint64_t> excluded_seeds;  // runs that went non-finite
};

// Unit-cost chain over spec.n_bins, one run per seed offset; deterministic and
// independent of the job count.
BatchResult run_batch(const RandomInstanceSpec& spec, const DescentConfig& cfg, int runs,
                      int jobs = 1);

}  // namespace emd
