// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "emd/analysis.hpp"
#include "emd/chain.hpp"
#include "emd/descent.hpp"
#include "emd/distribution.hpp"
#include "emd/oracle.hpp"
#include "emd/rng.hpp"
#include "emd/sinkhorn.hpp"
#include "emd/tree.hpp"
#include "support.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using emd::test::max_abs_diff;
using emd::test::random_chain;
using emd::test::random_pair;

struct Gate {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

int g_failures = 0;

void criterion(const std::string& name, double time_limit_s,
               const std::function<void(Gate&)>& body) {
  Gate gate;
  const auto t0 = Clock::now();
  try {
    body(gate);
  } catch (const std::exception& e) {
    gate.ok = false;
    gate.notes.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (time_limit_s > 0 && secs > time_limit_s) {
    gate.ok = false;
    gate.notes.push_back("runtime " + std::to_string(secs) + "s exceeds " +
                         std::to_string(time_limit_s) + "s");
  }
  std::printf("[%s] %s (%.2fs)\n", gate.ok ? "PASS" : "FAIL", name.c_str(), secs);
  for (const auto& n : gate.notes) std::printf("       %s\n", n.c_str());
  std::fflush(stdout);
  if (!gate.ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- 1: golden vectors on the 4-leaf hierarchy -----------------------------
void golden_vectors(Gate& g) {
  const auto tree = emd::test::fixture_tree();
  const auto p = emd::test::fixture_p();
  const auto q = emd::test::fixture_q();

  // Warm one evaluation, then time the four golden calls.
  volatile double sink = emd::tree_emd(tree, p, q, 1.0);
  (void)sink;
  const auto t0 = Clock::now();
  const auto g1 = emd::tree_emd_grad(tree, p, q, 1.0);
  const auto g2 = emd::tree_emd_grad(tree, p, q, 2.0);
  const double d1 = emd::tree_emd(tree, p, q, 1.0);
  const double d2 = emd::tree_emd(tree, p, q, 2.0);
  const double eval_s = std::chrono::duration<double>(Clock::now() - t0).count();

  g.require(max_abs_diff(g1, {1.5, -0.5, -1.5, 0.5}) <= 1e-12, "rho=1 gradient off");
  g.require(max_abs_diff(g2, {0.5, -0.1, -0.7, 0.3}) <= 1e-12, "rho=2 gradient off");
  g.require(std::abs(d1 - 0.9) <= 1e-12, "rho=1 distance off: " + fmt(d1));
  g.require(std::abs(d2 - 0.19) <= 1e-12, "rho=2 distance off: " + fmt(d2));
  g.require(eval_s < 1e-3, "evaluation took " + std::to_string(eval_s) + "s");
}

// --- 2: root invariance -----------------------------------------------------
void root_invariance(Gate& g) {
  double worst_dist = 0.0, worst_grad = 0.0;
  int rerootings = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const int leaves = 2 + static_cast<int>(seed % 31);
    const auto tree = emd::generate_random_tree(leaves, 2 + seed % 5, {0.5, 2.0}, seed);
    const auto [p, q] = random_pair(leaves, seed * 13 + 1);
    if (tree.children()[tree.root()].size() == 1) continue;  // no valid re-rooting
    for (double rho : {1.0, 2.0}) {
      const double base = emd::tree_emd(tree, p, q, rho);
      const auto base_grad = emd::tree_emd_grad(tree, p, q, rho);
      for (int v = 0; v < tree.node_count(); ++v) {
        if (tree.is_leaf(v) || v == tree.root()) continue;
        const auto moved = emd::reroot(tree, tree.ids()[v]);
        worst_dist = std::max(worst_dist, std::abs(emd::tree_emd(moved, p, q, rho) - base));
        worst_grad =
            std::max(worst_grad, max_abs_diff(emd::tree_emd_grad(moved, p, q, rho), base_grad));
        ++rerootings;
      }
    }
  }
  g.require(rerootings > 5000, "too few re-rootings exercised");
  g.require(worst_dist <= 1e-9, "distance deviation " + fmt(worst_dist));
  g.require(worst_grad <= 1e-9, "gradient deviation " + fmt(worst_grad));
  g.note("max deviation: distance " + fmt(worst_dist) + ", gradient " + fmt(worst_grad) +
         " over " + std::to_string(rerootings) + " re-rootings");
}

// --- 3: oracle equivalence ----------------------------------------------------
void oracle_equivalence(Gate& g) {
  double worst_chain = 0.0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const int n = 2 + static_cast<int>(seed % 15);
    const auto [p, q] = random_pair(n, seed * 7 + 3);
    const auto metric = random_chain(n, seed + 5000);
    const double diff = std::abs(emd::chain_emd(p, q, metric, 1.0) -
                                 emd::exact_emd(p, q, emd::to_cost_matrix(metric)).value);
    worst_chain = std::max(worst_chain, diff);
  }
  double worst_tree = 0.0;
  for (uint64_t seed = 0; seed < 500; ++seed) {
    const int leaves = 2 + static_cast<int>(seed % 11);
    const auto tree = emd::generate_random_tree(leaves, 2 + seed % 4, {0.1, 2.0}, seed);
    const auto [p, q] = random_pair(leaves, seed + 321);
    const double diff = std::abs(emd::tree_emd(tree, p, q, 1.0) -
                                 emd::exact_emd(p, q, emd::tree_to_cost_matrix(tree)).value);
    worst_tree = std::max(worst_tree, diff);
  }
  g.require(worst_chain <= 1e-9, "chain deviation " + fmt(worst_chain));
  g.require(worst_tree <= 1e-9, "tree deviation " + fmt(worst_tree));
  g.note("max |closed - oracle|: chain " + fmt(worst_chain) + ", tree " + fmt(worst_tree));
}

// --- 4: mass-preserving gradients ---------------------------------------------
void gradient_mass(Gate& g) {
  double worst = 0.0;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    const double rho = seed % 2 ? 2.0 : 1.0;
    std::vector<double> grad;
    if (seed % 4 < 2) {
      const int n = 2 + static_cast<int>(seed % 63);
      const auto [p, q] = random_pair(n, seed);
      grad = emd::chain_emd_grad(p, q, random_chain(n, seed ^ 0xabcdu), rho);
    } else {
      const int leaves = 2 + static_cast<int>(seed % 47);
      const auto tree = emd::generate_random_tree(leaves, 2 + seed % 5, {0.2, 2.0}, seed);
      const auto [p, q] = random_pair(leaves, seed);
      grad = emd::tree_emd_grad(tree, p, q, rho);
    }
    worst = std::max(worst, std::abs(emd::test::sum(grad)));
  }
  g.require(worst <= 1e-12, "gradient sum " + fmt(worst));
  g.note("max |sum grad| " + fmt(worst) + " over 10000 instances");
}

// --- 5: finite-difference checks ------------------------------------------------
void finite_differences(Gate& g) {
  double worst = 0.0;
  for (uint64_t seed = 0; seed < 250; ++seed) {
    const int n = 2 + static_cast<int>(seed % 15);
    const auto pair = random_pair(n, seed * 3 + 19);
    const auto& p = pair.first;
    const auto& q = pair.second;
    const auto metric = random_chain(n, seed + 40);
    const auto grad = emd::chain_emd_grad(p, q, metric, 2.0);
    const auto fd = emd::test::projected_fd_gradient(
        [&](const std::vector<double>& x) { return emd::chain_emd(x, q, metric, 2.0); }, p);
    worst = std::max(worst, emd::test::relative_vector_error(grad, fd));
  }
  for (uint64_t seed = 0; seed < 250; ++seed) {
    const int leaves = 2 + static_cast<int>(seed % 15);
    const auto tree = emd::generate_random_tree(leaves, 2 + seed % 4, {0.2, 2.0}, seed + 7);
    const auto pair = random_pair(leaves, seed * 5 + 2);
    const auto& p = pair.first;
    const auto& q = pair.second;
    const auto grad = emd::tree_emd_grad(tree, p, q, 2.0);
    const auto fd = emd::test::projected_fd_gradient(
        [&](const std::vector<double>& x) { return emd::tree_emd(tree, x, q, 2.0); }, p);
    worst = std::max(worst, emd::test::relative_vector_error(grad, fd));
  }
  g.require(worst <= 1e-5, "gradient FD relative error " + fmt(worst));

  // Hessian against differenced gradients. The Hessian is stated in the
  // N-scaled zero-sum basis, so the differences along those directions are
  // scaled back by N.
  double worst_h = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const auto metric = random_chain(n, 600u + n);
    const auto [p, q] = random_pair(n, 700u + n);
    const auto h = emd::chain_emd2_hessian(metric, n);
    const double step = 1e-6;
    for (int l = 0; l < n; ++l) {
      std::vector<double> hi = p, lo = p;
      for (int j = 0; j < n; ++j) {
        const double dir = n * ((j == l ? 1.0 : 0.0) - 1.0 / n);
        hi[j] += step * dir;
        lo[j] -= step * dir;
      }
      const auto ghi = emd::chain_emd_grad(hi, q, metric, 2.0);
      const auto glo = emd::chain_emd_grad(lo, q, metric, 2.0);
      for (int k = 0; k < n; ++k) {
        const double fd = n * (ghi[k] - glo[k]) / (2.0 * step);
        worst_h = std::max(worst_h,
                           std::abs(fd - h.at(k, l)) / std::max(1.0, std::abs(h.at(k, l))));
      }
    }
  }
  g.require(worst_h <= 1e-5, "hessian FD relative error " + fmt(worst_h));
  g.note("max FD error: gradient " + fmt(worst) + ", hessian " + fmt(worst_h));
}

// --- 6: descent qualitative reproduction -------------------------------------
void descent_reproduction(Gate& g) {
  emd::DescentConfig cfg;  // rho=2 loss, 2^20 rate, sqrt(2) factor, 2000 epochs
  emd::RandomInstanceSpec spec{64, emd::Setting::easy, 1};
  const auto easy = emd::run_batch(spec, cfg, 64, 2);
  g.require(easy.excluded_seeds.empty(), "easy runs went non-finite");
  const double easy_final = easy.mean.back().emd_error;
  g.require(easy_final <= 1e-3, "easy final mean error " + fmt(easy_final));
  double worst_mass = 0.0;
  for (const auto& run : easy.runs)
    for (const auto& rec : run.records)
      worst_mass = std::max(worst_mass, std::abs(rec.total_mass - 1.0));
  g.require(worst_mass <= 1e-6, "mass drift " + fmt(worst_mass));

  emd::DescentConfig hard_cfg;
  hard_cfg.loss = emd::DescentLoss::emd_rho1;
  emd::RandomInstanceSpec hard_spec{64, emd::Setting::hard, 1};
  const auto hard = emd::run_batch(hard_spec, hard_cfg, 64, 2);
  const double initial = hard.mean.front().emd_error;
  const double final_err = hard.mean.back().emd_error;
  g.require(final_err >= 0.1 * initial,
            "rho=1 hard descent did not stall: " + fmt(final_err) + " vs initial " + fmt(initial));
  g.note("easy final " + fmt(easy_final) + ", mass drift " + fmt(worst_mass) + "; hard " +
         fmt(final_err) + " of initial " + fmt(initial));
}

// --- 7: Sinkhorn stability trends ---------------------------------------------
void sinkhorn_stability(Gate& g) {
  const auto tree = emd::test::deep_tree32();
  const auto m = emd::tree_to_cost_matrix(tree);
  g.require(m.max_entry() >= 20.0, "synthetic metric too shallow");
  const auto [p, q] = random_pair(32, 424242);

  emd::ExactReference ref;
  ref.value = emd::exact_emd(p, q, m).value;
  ref.grad = emd::tree_emd_grad(tree, p, q, 1.0);

  emd::SweepGrid grid{emd::log_spaced(0.1, 100.0, 40),
                      {10000},
                      {emd::Precision::binary64, emd::Precision::binary32}};
  const auto rows = emd::run_lambda_sweep(p, q, m, grid, ref, 2);
  const size_t nl = grid.lambdas.size();
  const auto* f64 = &rows[0];
  const auto* f32 = &rows[nl];

  // A contiguous stretch of lambdas where the f64 ratio sits in [1, 1.05].
  int best_stretch = 0, stretch = 0;
  for (size_t i = 0; i < nl; ++i) {
    const bool in_band = f64[i].converged && !f64[i].degenerate &&
                         f64[i].ratio >= 1.0 - 1e-6 && f64[i].ratio <= 1.05;
    stretch = in_band ? stretch + 1 : 0;
    best_stretch = std::max(best_stretch, stretch);
  }
  g.require(best_stretch >= 3, "no contiguous lambda range with ratio in [1, 1.05]");

  auto first_bad32 = nl, first_bad64 = nl;
  for (size_t i = 0; i < nl; ++i) {
    const bool bad64 = f64[i].degenerate || !std::isfinite(f64[i].sd);
    if (bad64 && first_bad64 == nl) first_bad64 = i;
    const bool bad32 = f32[i].degenerate || !std::isfinite(f32[i].sd) ||
                       (!bad64 && std::abs(f32[i].sd - f64[i].sd) > 0.1 * f64[i].sd);
    if (bad32 && first_bad32 == nl) first_bad32 = i;
  }
  g.require(first_bad32 < nl, "float32 never degenerated on the grid");
  g.require(first_bad64 < nl, "float64 never degenerated on the grid");
  g.require(first_bad32 < first_bad64, "float32 did not degenerate before float64");
  g.note("ratio band length " + std::to_string(best_stretch) + "; first degenerate lambda: f32 " +
         fmt(grid.lambdas[std::min(first_bad32, nl - 1)]) + ", f64 " +
         fmt(grid.lambdas[std::min(first_bad64, nl - 1)]));
}

// --- 8: feasible-plan bound ------------------------------------------------------
void feasible_plan_bound(Gate& g) {
  int qualified = 0;
  double worst_gap = 0.0;
  for (uint64_t seed = 0; seed < 500; ++seed) {
    const int n = 2 + static_cast<int>(seed % 15);
    const auto [p, q] = random_pair(n, seed * 17 + 5);
    const auto m = emd::to_cost_matrix(random_chain(n, seed + 31));
    emd::SinkhornConfig cfg;
    cfg.lambda = 4.0 + static_cast<double>(seed % 8);
    cfg.max_iter = 100000;
    cfg.tol = 1e-13;
    const auto r = emd::sinkhorn(p, q, m, cfg);
    if (!r.converged || r.numerically_degenerate || r.marginal_error > 1e-8) continue;
    ++qualified;
    const double opt = emd::exact_emd(p, q, m).value;
    worst_gap = std::max(worst_gap, opt - r.distance);
  }
  g.require(qualified >= 250, "only " + std::to_string(qualified) + " runs qualified");
  g.require(worst_gap <= 1e-6, "distance undercut the optimum by " + fmt(worst_gap));
  g.note(std::to_string(qualified) + "/500 qualified, worst gap " + fmt(worst_gap));
}

// --- 9: closed form vs Sinkhorn speed ---------------------------------------------
void speed_sanity(Gate& g) {
  const auto tree = emd::generate_random_tree(1030, 12, {1.0, 1.0}, 9);
  g.require(tree.node_count() == 1374,
            "tree has " + std::to_string(tree.node_count()) + " nodes");
  const auto m = emd::tree_to_cost_matrix(tree);
  const int batch = 512;

  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  pairs.reserve(batch);
  for (int r = 0; r < batch; ++r) pairs.push_back(random_pair(tree.leaf_count(), 1000 + r));

  volatile double checksum = 0.0;
  const auto t0 = Clock::now();
  for (const auto& [p, q] : pairs) checksum = checksum + emd::tree_emd_grad(tree, p, q, 2.0)[0];
  const double closed_s = std::chrono::duration<double>(Clock::now() - t0).count();

  emd::SinkhornConfig cfg;
  cfg.lambda = 3.0;
  cfg.max_iter = 100;
  const auto t1 = Clock::now();
  for (const auto& [p, q] : pairs) checksum = checksum + emd::sinkhorn(p, q, m, cfg).distance;
  const double sink_s = std::chrono::duration<double>(Clock::now() - t1).count();

  g.require(closed_s * 10.0 <= sink_s,
            "closed form only " + fmt(sink_s / closed_s) + "x faster");
  g.note("512 gradient evaluations: closed form " + fmt(closed_s) + "s, Sinkhorn(100 iter) " +
         fmt(sink_s) + "s, ratio " + fmt(sink_s / std::max(closed_s, 1e-12)));
}

}  // namespace

int main() {
  criterion("1. golden vectors on the 4-leaf hierarchy", 0, golden_vectors);
  criterion("2. root invariance across re-rootings", 30, root_invariance);
  criterion("3. closed forms match the min-cost-flow oracle", 60, oracle_equivalence);
  criterion("4. gradients conserve mass", 0, gradient_mass);
  criterion("5. finite-difference gradient and hessian checks", 0, finite_differences);
  criterion("6. descent: squared loss converges, rho=1 hard stalls", 300, descent_reproduction);
  criterion("7. Sinkhorn stability trends across precision", 120, sinkhorn_stability);
  criterion("8. converged Sinkhorn respects the feasible-plan bound", 0, feasible_plan_bound);
  criterion("9. closed form at least 10x faster than capped Sinkhorn", 0, speed_sanity);
  std::printf("%s: %d criterion(s) failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures;
}
