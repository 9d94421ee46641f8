#include "emd/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "emd/distribution.hpp"
#include "emd/errors.hpp"

namespace emd {
namespace {

constexpr double kSupplyDone = 1e-14;    // remaining mass treated as exhausted
constexpr double kReducedCostTol = 1e-12;

}  // namespace

// Successive shortest paths on the complete bipartite transportation graph.
// Node potentials keep reduced costs non-negative, so plain Dijkstra (dense
// O(V^2) scan, V = 2N) finds each augmenting path. Every augmentation zeroes a
// remaining supply, a remaining demand, or a residual back arc, so the loop
// terminates; the final plan is certified against complementary slackness.
OracleResult exact_emd(const std::vector<double>& p, const std::vector<double>& q,
                       const CostMatrix& m, int max_size) {
  const int n = m.n();
  if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n)
    raise(errc::shape_mismatch, "p, q and the cost matrix must agree in size");
  if (n > max_size)
    raise(errc::too_large, "oracle capped at " + std::to_string(max_size) + " bins");

  double sp = 0.0, sq = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) raise(errc::negative_entry, "p has a negative entry");
    sp += v;
  }
  for (double v : q) {
    if (!(v >= 0.0)) raise(errc::negative_entry, "q has a negative entry");
    sq += v;
  }
  if (!(std::abs(sp - sq) <= kMassTol))
    raise(errc::mass_mismatch, "total masses differ by " + std::to_string(sp - sq));

  std::vector<double> supply = p, demand = q;
  SquareMatrix flow(n);
  // Potentials: pi[v] for sources v in [0, n), sinks in [n, 2n).
  std::vector<double> pi(2 * n, 0.0);

  std::vector<double> dist(2 * n);
  std::vector<int> pred(2 * n);  // predecessor node on the shortest path
  std::vector<char> done(2 * n);

  const double inf = std::numeric_limits<double>::infinity();
  // Each augmentation saturates something; 2N exhaust supplies/demands and at
  // most N^2 back arcs can be emptied between them.
  const long max_augment = 4L * n * n + 8L * n + 16;

  for (long round = 0;; ++round) {
    double remaining = 0.0;
    for (double s : supply) remaining = std::max(remaining, s);
    if (remaining <= kSupplyDone) break;
    if (round > max_augment) raise(errc::solver_failure, "augmentation limit exceeded");

    // Multi-source Dijkstra over reduced costs from all live supplies. The
    // sources enter with offset pi_i - min(pi), the reduced cost of a zero-cost
    // arc from a virtual super-source, which keeps the offsets non-negative.
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    double pi_min = inf;
    for (int i = 0; i < n; ++i)
      if (supply[i] > kSupplyDone) pi_min = std::min(pi_min, pi[i]);
    for (int i = 0; i < n; ++i)
      if (supply[i] > kSupplyDone) dist[i] = pi[i] - pi_min;

    int sink = -1;
    while (true) {
      int u = -1;
      double best = inf;
      for (int v = 0; v < 2 * n; ++v)
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      if (u < 0) break;
      done[u] = 1;
      if (u >= n && demand[u - n] > kSupplyDone) {
        sink = u;
        break;
      }
      if (u < n) {
        // Forward arcs source u -> every sink.
        for (int j = 0; j < n; ++j) {
          const int v = n + j;
          if (done[v]) continue;
          const double rc = m.at(u, j) - pi[u] + pi[v];
          if (dist[u] + rc < dist[v]) {
            dist[v] = dist[u] + rc;
            pred[v] = u;
          }
        }
      } else {
        // Residual back arcs sink u -> sources with positive flow.
        const int j = u - n;
        for (int i = 0; i < n; ++i) {
          if (done[i] || flow.at(i, j) <= 0.0) continue;
          const double rc = -(m.at(i, j) - pi[i] + pi[u]);
          if (dist[u] + rc < dist[i]) {
            dist[i] = dist[u] + rc;
            pred[i] = u;
          }
        }
      }
    }
    if (sink < 0) raise(errc::solver_failure, "no augmenting path despite remaining supply");

    // Bottleneck along the path, then augment.
    double delta = demand[sink - n];
    int v = sink;
    while (pred[v] != -1) {
      const int u = pred[v];
      if (u >= n) delta = std::min(delta, flow.at(v, u - n));  // back arc v<-u uses flow(v, u-n)
      v = u;
    }
    delta = std::min(delta, supply[v]);

    v = sink;
    while (pred[v] != -1) {
      const int u = pred[v];
      if (u < n)
        flow.at(u, v - n) += delta;
      else
        flow.at(v, u - n) -= delta;
      v = u;
    }
    supply[v] -= delta;
    demand[sink - n] -= delta;

    // Standard potential update; unvisited nodes shift by the sink distance.
    const double dmax = dist[sink];
    for (int w = 0; w < 2 * n; ++w) pi[w] -= std::min(dist[w], dmax);
  }

  // Optimality certificate: no residual arc with negative reduced cost, and
  // complementary slackness on used arcs.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double rc = m.at(i, j) - pi[i] + pi[n + j];
      if (rc < -kReducedCostTol)
        raise(errc::solver_failure, "negative reduced cost in the residual network");
      if (flow.at(i, j) > 0.0 && std::abs(rc) > kReducedCostTol)
        raise(errc::solver_failure, "used arc violates complementary slackness");
    }
  }

  TransportPlan plan{std::move(flow)};
  double value = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) value += plan.flows.at(i, j) * m.at(i, j);
  return OracleResult{value, std::move(plan)};
}

}  // namespace emd
