#include "emd/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "emd/distribution.hpp"
#include "emd/io.hpp"
#include "emd/rng.hpp"

namespace emd {
namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double pow_abs(double x, double rho) {
  if (rho == 1.0) return std::abs(x);
  if (rho == 2.0) return x * x;
  return std::pow(std::abs(x), rho);
}

double edge_weight(double cost, double phi, double rho) {
  if (rho == 1.0) return cost * sgn(phi);
  if (rho == 2.0) return 2.0 * cost * phi;
  return rho * cost * sgn(phi) * std::pow(std::abs(phi), rho - 1.0);
}

void check_rho(double rho) {
  if (!(rho >= 1.0)) raise(errc::bad_rho, "rho must be >= 1");
}

void check_leaf_pair(const MetricTree& tree, const std::vector<double>& p,
                     const std::vector<double>& q, bool check_mass) {
  if (static_cast<int>(p.size()) != tree.leaf_count() || p.size() != q.size())
    raise(errc::length_mismatch, "tree has " + std::to_string(tree.leaf_count()) +
                                     " leaves, got " + std::to_string(p.size()) + " / " +
                                     std::to_string(q.size()) + " values");
  if (!check_mass) return;
  double sp = 0.0, sq = 0.0, scale = 1.0;
  for (double v : p) {
    sp += v;
    scale = std::max(scale, std::abs(v));
  }
  for (double v : q) {
    sq += v;
    scale = std::max(scale, std::abs(v));
  }
  // Magnitude-scaled tolerance, matching the chain kernels.
  if (!(std::abs(sp - sq) <= kMassTol * scale))
    raise(errc::mass_mismatch, "total masses differ by " + std::to_string(sp - sq));
}

SubtreeFlow flow_core(const MetricTree& tree, const std::vector<double>& p,
                      const std::vector<double>& q, bool check_mass) {
  check_leaf_pair(tree, p, q, check_mass);
  std::vector<double> phi(tree.node_count(), 0.0);
  for (int k = 0; k < tree.leaf_count(); ++k) {
    const int leaf = tree.leaf_order()[k];
    phi[leaf] = p[k] - q[k];
  }
  for (int v : tree.postorder())
    if (v != tree.root()) phi[tree.parent(v)] += phi[v];
  return SubtreeFlow{std::move(phi)};
}

double emd_core(const MetricTree& tree, const std::vector<double>& p,
                const std::vector<double>& q, double rho, bool check_mass) {
  check_rho(rho);
  const SubtreeFlow flow = flow_core(tree, p, q, check_mass);
  double total = 0.0;
  for (int v : tree.postorder())
    if (v != tree.root()) total += tree.edge_cost(v) * pow_abs(flow.phi_tilde[v], rho);
  return total;
}

std::vector<double> grad_core(const MetricTree& tree, const std::vector<double>& p,
                              const std::vector<double>& q, double rho, bool check_mass) {
  check_rho(rho);
  const SubtreeFlow flow = flow_core(tree, p, q, check_mass);
  const int n = tree.leaf_count();
  const auto& post = tree.postorder();

  // grad_k = (sum of edge weights on the leaf-to-root path) - shift, where the
  // shift collects the |leaves(i)|/N projection terms.
  std::vector<double> weight(tree.node_count(), 0.0);
  std::vector<double> leaves_below(tree.node_count(), 0.0);
  double shift = 0.0;
  for (int v : post) {
    if (tree.is_leaf(v)) leaves_below[v] = 1.0;
    if (v == tree.root()) continue;
    leaves_below[tree.parent(v)] += leaves_below[v];
    weight[v] = edge_weight(tree.edge_cost(v), flow.phi_tilde[v], rho);
    shift += weight[v] * leaves_below[v];
  }
  shift /= n;

  std::vector<double> acc(tree.node_count(), 0.0);
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    const int v = *it;
    if (v != tree.root()) acc[v] = acc[tree.parent(v)] + weight[v];
  }

  std::vector<double> grad(n);
  for (int k = 0; k < n; ++k) grad[k] = acc[tree.leaf_order()[k]] - shift;
  // Remove the cancellation residue so the zero-sum contract holds exactly
  // enough (see the chain gradient).
  double residue = 0.0;
  for (double v : grad) residue += v;
  residue /= n;
  for (double& v : grad) v -= residue;
  return grad;
}

}  // namespace

MetricTree::MetricTree(std::vector<std::string> ids, std::vector<int> parent,
                       std::vector<double> cost_to_parent, bool allow_zero_cost)
    : ids_(std::move(ids)), parent_(std::move(parent)), cost_(std::move(cost_to_parent)) {
  const int n = static_cast<int>(ids_.size());
  if (n < 2 || parent_.size() != ids_.size() || cost_.size() != ids_.size())
    raise(errc::bad_size, "inconsistent tree arrays");

  {
    std::unordered_map<std::string, int> seen;
    for (int v = 0; v < n; ++v)
      if (!seen.emplace(ids_[v], v).second) raise(errc::duplicate_id, ids_[v]);
  }

  for (int v = 0; v < n; ++v) {
    if (parent_[v] == -1) {
      if (root_ != -1) raise(errc::multiple_roots, ids_[root_] + " and " + ids_[v]);
      root_ = v;
      cost_[v] = 0.0;
      continue;
    }
    if (parent_[v] < 0 || parent_[v] >= n || parent_[v] == v)
      raise(errc::cycle, "node " + ids_[v] + " has an invalid parent");
    if (!std::isfinite(cost_[v]) || cost_[v] < 0.0 || (cost_[v] == 0.0 && !allow_zero_cost))
      raise(errc::non_positive_cost, "edge above " + ids_[v]);
  }
  if (root_ == -1) raise(errc::cycle, "no root: every node has a parent");

  // Every parent chain must terminate at the root without revisiting a node.
  {
    std::vector<int> color(n, 0);  // 0 new, 1 on current chain, 2 settled
    std::vector<int> chain;
    for (int v = 0; v < n; ++v) {
      if (color[v] != 0) continue;
      chain.clear();
      int u = v;
      while (true) {
        if (color[u] == 1) raise(errc::cycle, "cycle through " + ids_[u]);
        if (color[u] == 2) break;
        color[u] = 1;
        chain.push_back(u);
        if (u == root_) break;
        u = parent_[u];
      }
      for (int w : chain) color[w] = 2;
    }
  }

  children_.assign(n, {});
  for (int v = 0; v < n; ++v)
    if (v != root_) children_[parent_[v]].push_back(v);

  leaf_pos_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (children_[v].empty()) {
      leaf_pos_[v] = static_cast<int>(leaf_order_.size());
      leaf_order_.push_back(v);
    }
  }
  if (leaf_order_.size() < 2)
    raise(errc::too_few_leaves, "tree has " + std::to_string(leaf_order_.size()) + " leaves");

  // Iterative DFS; reversing the parent-first visit yields a post-order.
  postorder_.reserve(n);
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    postorder_.push_back(v);
    for (int c : children_[v]) stack.push_back(c);
  }
  std::reverse(postorder_.begin(), postorder_.end());
  if (static_cast<int>(postorder_.size()) != n)
    raise(errc::disconnected_node, "tree walk did not reach every node");
}

int MetricTree::index_of(const std::string& id) const {
  for (int v = 0; v < node_count(); ++v)
    if (ids_[v] == id) return v;
  return -1;
}

MetricTree load_tree(std::istream& in, bool allow_zero_cost) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& id) {
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    const int v = static_cast<int>(ids.size());
    ids.push_back(id);
    index.emplace(id, v);
    return v;
  };

  struct Decl {
    int parent = -2;  // -2 undeclared, -1 root
    double cost = 0.0;
  };
  std::vector<Decl> decls;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string child, parent, cost_text;
    if (!(ls >> child)) continue;  // blank
    if (!(ls >> parent >> cost_text))
      raise(errc::parse_error, "line " + std::to_string(lineno) + ": expected 'child parent cost'");
    std::string extra;
    if (ls >> extra)
      raise(errc::parse_error, "line " + std::to_string(lineno) + ": trailing tokens");

    size_t pos = 0;
    double cost = 0.0;
    try {
      cost = std::stod(cost_text, &pos);
    } catch (const std::exception&) {
      raise(errc::parse_error, "line " + std::to_string(lineno) + ": bad cost '" + cost_text + "'");
    }
    if (pos != cost_text.size() || !std::isfinite(cost))
      raise(errc::parse_error, "line " + std::to_string(lineno) + ": bad cost '" + cost_text + "'");

    const int c = intern(child);
    if (static_cast<size_t>(c) >= decls.size()) decls.resize(ids.size());
    if (decls[c].parent != -2) raise(errc::duplicate_id, child);

    if (parent == "-") {
      if (cost != 0.0)
        raise(errc::parse_error, "line " + std::to_string(lineno) + ": root cost must be 0");
      decls[c].parent = -1;
    } else {
      if (cost < 0.0 || (cost == 0.0 && !allow_zero_cost))
        raise(errc::non_positive_cost, "edge above " + child);
      decls[c].parent = intern(parent);
      decls[c].cost = cost;
    }
  }
  decls.resize(ids.size());
  if (ids.empty()) raise(errc::parse_error, "empty tree file");

  // Cycles are reported ahead of root bookkeeping so that a rootless loop
  // ("x y 1 / y x 1") reads as a cycle, not a missing root.
  {
    const int n = static_cast<int>(ids.size());
    std::vector<int> color(n, 0);
    std::vector<int> chain;
    for (int v = 0; v < n; ++v) {
      if (color[v] != 0) continue;
      chain.clear();
      int u = v;
      while (color[u] == 0 && decls[u].parent >= 0) {
        color[u] = 1;
        chain.push_back(u);
        u = decls[u].parent;
      }
      if (color[u] == 1) raise(errc::cycle, "cycle through " + ids[u]);
      for (int w : chain) color[w] = 2;
    }
  }

  int root_count = 0;
  for (const auto& d : decls) root_count += d.parent == -1 ? 1 : 0;
  if (root_count > 1) {
    std::string names;
    for (size_t v = 0; v < decls.size(); ++v)
      if (decls[v].parent == -1) names += (names.empty() ? "" : ", ") + ids[v];
    raise(errc::multiple_roots, names);
  }
  for (size_t v = 0; v < decls.size(); ++v)
    if (decls[v].parent == -2)
      raise(errc::disconnected_node, ids[v] + " is referenced but never declared");
  if (root_count == 0) raise(errc::disconnected_node, "no root line present");

  std::vector<int> parent(ids.size());
  std::vector<double> cost(ids.size());
  for (size_t v = 0; v < decls.size(); ++v) {
    parent[v] = decls[v].parent;
    cost[v] = decls[v].cost;
  }
  return MetricTree(std::move(ids), std::move(parent), std::move(cost), allow_zero_cost);
}

MetricTree load_tree(const std::string& text, bool allow_zero_cost) {
  std::istringstream in(text);
  return load_tree(in, allow_zero_cost);
}

std::string save_tree(const MetricTree& tree) {
  std::ostringstream out;
  out << tree.ids()[tree.root()] << " - 0\n";
  for (int v = 0; v < tree.node_count(); ++v) {
    if (v == tree.root()) continue;
    out << tree.ids()[v] << ' ' << tree.ids()[tree.parent(v)] << ' '
        << format_shortest(tree.edge_cost(v)) << '\n';
  }
  return out.str();
}

SubtreeFlow subtree_flow(const MetricTree& tree, const std::vector<double>& p,
                         const std::vector<double>& q) {
  return flow_core(tree, p, q, true);
}

double tree_emd(const MetricTree& tree, const std::vector<double>& p,
                const std::vector<double>& q, double rho) {
  return emd_core(tree, p, q, rho, true);
}

std::vector<double> tree_emd_grad(const MetricTree& tree, const std::vector<double>& p,
                                  const std::vector<double>& q, double rho) {
  return grad_core(tree, p, q, rho, true);
}

namespace detail {

double tree_emd_drifting(const MetricTree& tree, const std::vector<double>& p,
                         const std::vector<double>& q, double rho) {
  return emd_core(tree, p, q, rho, false);
}

std::vector<double> tree_emd_grad_drifting(const MetricTree& tree, const std::vector<double>& p,
                                           const std::vector<double>& q, double rho) {
  return grad_core(tree, p, q, rho, false);
}

}  // namespace detail

MetricTree reroot(const MetricTree& tree, const std::string& new_root) {
  const int target = tree.index_of(new_root);
  if (target < 0) raise(errc::unknown_node, new_root);
  if (target == tree.root()) return tree;
  if (tree.is_leaf(target))
    raise(errc::leaf_root_change, new_root + " is a leaf");
  if (tree.children()[tree.root()].size() == 1)
    raise(errc::leaf_root_change,
          "root " + tree.ids()[tree.root()] + " has a single child and would become a leaf");

  std::vector<int> parent(tree.node_count());
  std::vector<double> cost(tree.node_count());
  bool has_zero_cost = false;
  for (int v = 0; v < tree.node_count(); ++v) {
    parent[v] = tree.parent(v);
    cost[v] = tree.edge_cost(v);
    if (v != tree.root() && cost[v] == 0.0) has_zero_cost = true;
  }
  // Reverse every edge on the path new root -> old root; costs stay with
  // their undirected edge.
  int prev = -1;
  double prev_cost = 0.0;
  for (int v = target; v != -1;) {
    const int next = tree.parent(v);
    const double carried = tree.edge_cost(v);
    parent[v] = prev;
    cost[v] = prev_cost;
    prev = v;
    prev_cost = carried;
    v = next;
  }
  return MetricTree(tree.ids(), std::move(parent), std::move(cost), has_zero_cost);
}

CostMatrix tree_to_cost_matrix(const MetricTree& tree) {
  const int n = tree.leaf_count();
  const int g = tree.node_count();
  SquareMatrix m(n);

  // Undirected DFS from every leaf; O(N * |G|).
  std::vector<double> dist(g);
  std::vector<int> stack;
  for (int a = 0; a < n; ++a) {
    const int src = tree.leaf_order()[a];
    std::vector<char> seen(g, 0);
    stack.clear();
    stack.push_back(src);
    seen[src] = 1;
    dist[src] = 0.0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const int pv = tree.parent(v);
      if (pv != -1 && !seen[pv]) {
        seen[pv] = 1;
        dist[pv] = dist[v] + tree.edge_cost(v);
        stack.push_back(pv);
      }
      for (int c : tree.children()[v]) {
        if (!seen[c]) {
          seen[c] = 1;
          dist[c] = dist[v] + tree.edge_cost(c);
          stack.push_back(c);
        }
      }
    }
    for (int b = 0; b < n; ++b)
      if (b != a) m.at(a, b) = dist[tree.leaf_order()[b]];
  }
  // Make symmetry exact rather than up to the two traversal orders.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) m.at(b, a) = m.at(a, b);
  return CostMatrix(std::move(m));
}

MetricTree generate_random_tree(int n_leaves, int max_depth,
                                std::pair<double, double> cost_range, uint64_t seed) {
  const auto [lo, hi] = cost_range;
  if (n_leaves < 2) raise(errc::bad_params, "n_leaves must be >= 2");
  if (max_depth < 1) raise(errc::bad_params, "max_depth must be >= 1");
  if (!(lo > 0.0) || !(hi >= lo)) raise(errc::bad_params, "cost range must be positive");

  Xoshiro256pp rng(seed);
  int n_internal = max_depth == 1 ? 1 : 1 + (n_leaves - 1) / 3;

  std::vector<std::string> ids;
  std::vector<int> parent;
  std::vector<double> cost;
  std::vector<int> depth;
  auto add_node = [&](int par, double c) {
    ids.push_back("n" + std::to_string(ids.size()));
    parent.push_back(par);
    cost.push_back(c);
    depth.push_back(par < 0 ? 0 : depth[par] + 1);
    return static_cast<int>(ids.size()) - 1;
  };

  add_node(-1, 0.0);  // root
  std::vector<int> internals{0};
  for (int k = 1; k < n_internal; ++k) {
    std::vector<int> eligible;
    for (int v : internals)
      if (depth[v] <= max_depth - 2) eligible.push_back(v);
    const int par = eligible[rng.below(eligible.size())];
    internals.push_back(add_node(par, rng.uniform(lo, hi)));
  }

  // Internal nodes that stayed childless get the first leaves, so none of them
  // ends up counted as a leaf.
  std::vector<int> child_count(ids.size(), 0);
  for (size_t v = 1; v < ids.size(); ++v) ++child_count[parent[v]];
  int placed = 0;
  for (int v : internals) {
    if (child_count[v] == 0 && placed < n_leaves) {
      add_node(v, rng.uniform(lo, hi));
      ++child_count[v];
      ++placed;
    }
  }
  for (; placed < n_leaves; ++placed) {
    const int par = internals[rng.below(internals.size())];
    add_node(par, rng.uniform(lo, hi));
    ++child_count[par];
  }

  return MetricTree(std::move(ids), std::move(parent), std::move(cost));
}

}  // namespace emd
