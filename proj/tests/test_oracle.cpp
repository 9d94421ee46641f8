#include <cmath>

#include "doctest.h"
#include "emd/chain.hpp"
#include "emd/oracle.hpp"
#include "emd/rng.hpp"
#include "emd/tree.hpp"
#include "support.hpp"

using namespace emd;
using emd::test::random_chain;
using emd::test::random_pair;

namespace {

// Random feasible plan: push mass between random live supply/demand slots
// until everything is placed.
TransportPlan random_feasible_plan(const std::vector<double>& p, const std::vector<double>& q,
                                   Xoshiro256pp& rng) {
  const int n = static_cast<int>(p.size());
  std::vector<double> supply = p, demand = q;
  SquareMatrix flows(n);
  std::vector<int> live_i, live_j;
  for (int i = 0; i < n; ++i)
    if (supply[i] > 0) live_i.push_back(i);
  for (int j = 0; j < n; ++j)
    if (demand[j] > 0) live_j.push_back(j);
  while (!live_i.empty() && !live_j.empty()) {
    const size_t a = rng.below(live_i.size());
    const size_t b = rng.below(live_j.size());
    const int i = live_i[a], j = live_j[b];
    const double delta = std::min(supply[i], demand[j]);
    flows.at(i, j) += delta;
    supply[i] -= delta;
    demand[j] -= delta;
    if (supply[i] <= 0) {
      live_i[a] = live_i.back();
      live_i.pop_back();
    }
    if (demand[j] <= 0) {
      live_j[b] = live_j.back();
      live_j.pop_back();
    }
  }
  return TransportPlan{std::move(flows)};
}

}  // namespace

TEST_CASE("two-bin example") {
  const CostMatrix m(2, {0, 1, 1, 0});
  const auto r = exact_emd({0.7, 0.3}, {0.3, 0.7}, m);
  CHECK(r.value == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("identical distributions cost nothing") {
  const CostMatrix m = to_cost_matrix(ChainMetric::unit(4));
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const auto r = exact_emd(p, p, m);
  CHECK(r.value <= 1e-15);
  const auto rows = r.plan.row_sums();
  const auto cols = r.plan.col_sums();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(rows[i] - p[i]) <= 1e-9);
    CHECK(std::abs(cols[i] - p[i]) <= 1e-9);
  }
}

TEST_CASE("matches the chain closed form on the worked example") {
  const auto r = exact_emd({0.2, 0.4, 0.2, 0.2}, {0.0, 0.5, 0.5, 0.0},
                           to_cost_matrix(ChainMetric::unit(4)));
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("plan cost basics") {
  const CostMatrix m = to_cost_matrix(ChainMetric::unit(3));
  TransportPlan zero{SquareMatrix(3)};
  CHECK(plan_cost(zero, m) == 0.0);

  SquareMatrix diag(3);
  for (int i = 0; i < 3; ++i) diag.at(i, i) = 1.0 / 3;
  CHECK(plan_cost(TransportPlan{diag}, m) == 0.0);

  TransportPlan bad{SquareMatrix(2)};
  CHECK_THROWS_AS(plan_cost(bad, m), Error);
}

TEST_CASE("outer-product plan is feasible but not better than the oracle") {
  const auto tree = emd::test::fixture_tree();
  const auto m = tree_to_cost_matrix(tree);
  const auto p = emd::test::fixture_p();
  const auto q = emd::test::fixture_q();
  SquareMatrix outer(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) outer.at(i, j) = p[i] * q[j];
  const double outer_cost = plan_cost(TransportPlan{std::move(outer)}, m);
  const double opt = exact_emd(p, q, m).value;
  CHECK(opt == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(outer_cost >= opt - 1e-12);
}

TEST_CASE("oracle value lower-bounds random feasible plans") {
  Xoshiro256pp rng(2024);
  for (int instance = 0; instance < 5; ++instance) {
    const int n = 4 + instance * 3;
    const auto [p, q] = random_pair(n, 100 + instance);
    const auto m = to_cost_matrix(random_chain(n, 200 + instance));
    const double opt = exact_emd(p, q, m).value;
    for (int t = 0; t < 1000; ++t) {
      const auto plan = random_feasible_plan(p, q, rng);
      CHECK(plan_cost(plan, m) >= opt - 1e-12);
    }
  }
}

TEST_CASE("returned plans satisfy the marginals") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 15);
    const auto [p, q] = random_pair(n, seed);
    const auto r = exact_emd(p, q, to_cost_matrix(random_chain(n, seed + 1)));
    const auto rows = r.plan.row_sums();
    const auto cols = r.plan.col_sums();
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(rows[i] - p[i]) <= 1e-9);
      CHECK(std::abs(cols[i] - q[i]) <= 1e-9);
    }
  }
}

TEST_CASE("value scales linearly with the metric") {
  const auto [p, q] = random_pair(9, 17);
  const auto metric = random_chain(9, 18);
  const auto m = to_cost_matrix(metric);
  const double base = exact_emd(p, q, m).value;
  for (double c : {0.25, 3.0, 40.0}) {
    std::vector<double> scaled = m.matrix().data();
    for (double& v : scaled) v *= c;
    const double got = exact_emd(p, q, CostMatrix(m.n(), std::move(scaled))).value;
    CHECK(std::abs(got - c * base) <= 1e-12 * std::max(1.0, c * base));
  }
}

TEST_CASE("oracle input validation") {
  const CostMatrix m(2, {0, 1, 1, 0});
  CHECK_THROWS_AS(exact_emd({0.6, 0.6}, {0.5, 0.5}, m), Error);
  CHECK_THROWS_AS(exact_emd({-0.1, 1.1}, {0.5, 0.5}, m), Error);
  try {
    exact_emd({0.5, 0.5}, {0.5, 0.5}, m, 1);
  } catch (const Error& e) {
    CHECK(e.code() == errc::too_large);
  }
  CHECK_THROWS_AS(CostMatrix(2, {0, 1, 2, 0}), Error);   // asymmetric
  CHECK_THROWS_AS(CostMatrix(2, {1, 1, 1, 0}), Error);   // nonzero diagonal
  CHECK_THROWS_AS(CostMatrix(2, {0, -1, -1, 0}), Error); // negative cost
}
