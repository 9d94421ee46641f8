#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "emd/cost_matrix.hpp"
#include "emd/errors.hpp"

namespace emd {

// Rooted tree with per-edge transport costs. Distributions live on the leaves,
// matched positionally to leaf_order. Node indices follow first-appearance
// order (file order for loaded trees, creation order for generated ones), so
// leaf_order is simply the leaves in index order. Immutable after validation.
class MetricTree {
 public:
  // parent[v] == -1 marks the root; cost_to_parent[root] is ignored.
  MetricTree(std::vector<std::string> ids, std::vector<int> parent,
             std::vector<double> cost_to_parent, bool allow_zero_cost = false);

  int node_count() const { return static_cast<int>(ids_.size()); }
  int leaf_count() const { return static_cast<int>(leaf_order_.size()); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  double edge_cost(int v) const { return cost_[v]; }
  bool is_leaf(int v) const { return children_[v].empty(); }
  // Position of node v in leaf_order, -1 for internal nodes.
  int leaf_position(int v) const { return leaf_pos_[v]; }

  const std::vector<std::string>& ids() const { return ids_; }
  int index_of(const std::string& id) const;  // -1 if unknown
  const std::vector<std::vector<int>>& children() const { return children_; }
  const std::vector<int>& leaf_order() const { return leaf_order_; }
  // Children-before-parents order; computed iteratively so degenerate paths of
  // length 1e5+ do not overflow the call stack.
  const std::vector<int>& postorder() const { return postorder_; }

 private:
  std::vector<std::string> ids_;
  std::vector<int> parent_;
  std::vector<double> cost_;
  std::vector<std::vector<int>> children_;
  std::vector<int> leaf_order_;
  std::vector<int> leaf_pos_;
  std::vector<int> postorder_;
  int root_ = -1;
};

// Signed excess mass entering each node's subtree: phi_tilde[v] = sum over
// leaves under v of (p - q). Zero at the root when the masses agree.
struct SubtreeFlow {
  std::vector<double> phi_tilde;  // indexed by node
};

// Parse the tree file format: lines "child parent cost", the root declared as
// "root_id - 0", '#' comments and blank lines ignored. Zero costs are rejected
// unless allow_zero_cost is set.
MetricTree load_tree(std::istream& in, bool allow_zero_cost = false);
MetricTree load_tree(const std::string& text, bool allow_zero_cost = false);

// Inverse of load_tree; reloading preserves indices, costs and leaf order.
std::string save_tree(const MetricTree& tree);

// One iterative post-order pass, O(|nodes|).
SubtreeFlow subtree_flow(const MetricTree& tree, const std::vector<double>& p,
                         const std::vector<double>& q);

// Hierarchical EMD: sum over non-root nodes of edge_cost * |phi_tilde|^rho.
double tree_emd(const MetricTree& tree, const std::vector<double>& p,
                const std::vector<double>& q, double rho);

// Mass-preserving gradient along the zero-sum directions (delta_jk - 1/N):
//   grad_k = rho * sum_i cost_i * sgn(phi_i)|phi_i|^{rho-1} * ([k in leaves(i)] - |leaves(i)|/N)
// over non-root nodes i. Sums to zero.
std::vector<double> tree_emd_grad(const MetricTree& tree, const std::vector<double>& p,
                                  const std::vector<double>& q, double rho);

// Reorient parent pointers toward new_root, keeping the undirected edge set,
// costs and node order. Rejected if the leaf set would change (re-rooting at a
// leaf, or away from a degree-1 root), since that would change the domain the
// distributions live on.
MetricTree reroot(const MetricTree& tree, const std::string& new_root);

// Dense leaf-to-leaf path costs, ordered by leaf_order. Symmetric, zero
// diagonal, triangle inequality by construction.
CostMatrix tree_to_cost_matrix(const MetricTree& tree);

// Deterministic random tree: a root plus ~n_leaves/3 internal nodes, each
// guaranteed at least one child, then leaves attached uniformly at random.
// Edge costs are uniform in cost_range. Node ids are "n0", "n1", ... in
// creation order; the rng draws one value per attachment choice and one per
// edge cost, in creation order.
MetricTree generate_random_tree(int n_leaves, int max_depth,
                                std::pair<double, double> cost_range, uint64_t seed);

namespace detail {

// Mass-gate-free evaluation for the descent driver (see chain.hpp).
double tree_emd_drifting(const MetricTree& tree, const std::vector<double>& p,
                         const std::vector<double>& q, double rho);
std::vector<double> tree_emd_grad_drifting(const MetricTree& tree, const std::vector<double>& p,
                                           const std::vector<double>& q, double rho);

}  // namespace detail

}  // namespace emd
