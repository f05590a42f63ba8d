#include "kecsm/rounding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace kecsm {
namespace {

/// Tree rooted at vertex 0 with binary-lifting ancestors.
class RootedTree {
 public:
  RootedTree(int n, std::span<const Edge> tree) : n_(n) {
    if (tree.size() != static_cast<std::size_t>(n - 1)) throw InputError("tree must have n - 1 edges");
    const auto nn = static_cast<std::size_t>(n);
    std::vector<std::vector<std::pair<int, std::size_t>>> adj(nn);
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (tree[i].v >= n) throw InputError("tree edge out of range");
      adj[static_cast<std::size_t>(tree[i].u)].emplace_back(tree[i].v, i);
      adj[static_cast<std::size_t>(tree[i].v)].emplace_back(tree[i].u, i);
    }
    parent_.assign(nn, -1);
    parent_edge_.assign(nn, 0);
    depth_.assign(nn, 0);
    std::vector<char> seen(nn, 0);
    seen[0] = 1;
    order_.push_back(0);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const int v = order_[head];
      for (auto [w, id] : adj[static_cast<std::size_t>(v)]) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        parent_[static_cast<std::size_t>(w)] = v;
        parent_edge_[static_cast<std::size_t>(w)] = id;
        depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(v)] + 1;
        order_.push_back(w);
      }
    }
    if (order_.size() != nn) throw InputError("edges do not form a spanning tree");
    levels_ = std::max(1, static_cast<int>(std::bit_width(nn)));
    up_.assign(static_cast<std::size_t>(levels_), std::vector<int>(nn, 0));
    for (std::size_t v = 0; v < nn; ++v) up_[0][v] = std::max(parent_[v], 0);
    for (int j = 1; j < levels_; ++j)
      for (std::size_t v = 0; v < nn; ++v)
        up_[static_cast<std::size_t>(j)][v] = up_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(up_[static_cast<std::size_t>(j - 1)][v])];
  }

  [[nodiscard]] int lca(int a, int b) const {
    if (depth_[static_cast<std::size_t>(a)] < depth_[static_cast<std::size_t>(b)]) std::swap(a, b);
    int diff = depth_[static_cast<std::size_t>(a)] - depth_[static_cast<std::size_t>(b)];
    for (int j = 0; diff > 0; ++j, diff >>= 1)
      if (diff & 1) a = up_[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
    if (a == b) return a;
    for (int j = levels_ - 1; j >= 0; --j) {
      const auto& row = up_[static_cast<std::size_t>(j)];
      if (row[static_cast<std::size_t>(a)] != row[static_cast<std::size_t>(b)]) {
        a = row[static_cast<std::size_t>(a)];
        b = row[static_cast<std::size_t>(b)];
      }
    }
    return parent_[static_cast<std::size_t>(a)];
  }

  /// Adds `amount` to every tree edge on the path a..b (deferred).
  void add_path(std::vector<long>& diff, int a, int b, long amount) const {
    diff[static_cast<std::size_t>(a)] += amount;
    diff[static_cast<std::size_t>(b)] += amount;
    diff[static_cast<std::size_t>(lca(a, b))] -= 2 * amount;
  }

  /// Resolves deferred path increments into per-edge totals.
  [[nodiscard]] std::vector<long> collect(std::vector<long> diff) const {
    std::vector<long> per_edge(static_cast<std::size_t>(n_ - 1), 0);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const int v = *it;
      if (v == 0) continue;
      per_edge[parent_edge_[static_cast<std::size_t>(v)]] = diff[static_cast<std::size_t>(v)];
      diff[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])] += diff[static_cast<std::size_t>(v)];
    }
    return per_edge;
  }

  [[nodiscard]] int n() const { return n_; }

 private:
  int n_;
  std::vector<int> parent_;
  std::vector<std::size_t> parent_edge_;
  std::vector<int> depth_;
  std::vector<int> order_;  // BFS order from the root
  int levels_ = 1;
  std::vector<std::vector<int>> up_;
};

}  // namespace

RoundingParams RoundingParams::make(int k, std::optional<double> alpha, std::uint64_t seed) {
  if (k < 2) throw InputError("k must be at least 2");
  RoundingParams p;
  p.k = k;
  p.seed = seed;
  const double half = k / 2.0;
  double a = alpha.value_or(k >= 4 ? std::sqrt(std::log(half)) : 0.0);
  if (!(a >= 0) || !std::isfinite(a)) throw InputError("alpha must be a nonnegative number");
  a = std::min(a, std::sqrt(std::max(half - 1.0, 0.0)));
  p.alpha = a;
  p.trees = (k + 1) / 2;
  p.mst_copies = static_cast<long>(std::ceil(a * std::sqrt(std::max(half - 1.0, 0.0))));
  return p;
}

double RoundingParams::threshold() const {
  return k - alpha * std::sqrt(std::max(k / 2.0 - 1.0, 0.0));
}

std::vector<long> fundamental_cut_counts(int n, std::span<const Edge> tree, const MultiEdgeSet& m) {
  const RootedTree rooted(n, tree);
  std::vector<long> diff(static_cast<std::size_t>(n), 0);
  for (const auto& [e, mult] : m.entries()) {
    if (e.v >= n) throw InputError("multiset edge out of range");
    rooted.add_path(diff, e.u, e.v, mult);
  }
  return rooted.collect(std::move(diff));
}

std::vector<char> separates_u0_v0(int n, std::span<const Edge> tree, int u0, int v0) {
  const RootedTree rooted(n, tree);
  std::vector<long> diff(static_cast<std::size_t>(n), 0);
  rooted.add_path(diff, u0, v0, 1);
  const std::vector<long> on_path = rooted.collect(std::move(diff));
  std::vector<char> out(on_path.size());
  std::transform(on_path.begin(), on_path.end(), out.begin(), [](long c) { return c != 0 ? 1 : 0; });
  return out;
}

std::vector<std::size_t> mst(const Multigraph& g, std::span<const double> cost) {
  if (cost.size() != g.edges.size()) throw InputError("cost vector does not match edge count");
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
  std::vector<int> root(static_cast<std::size_t>(g.n));
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&](int v) {
    while (root[static_cast<std::size_t>(v)] != v) v = root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
    return v;
  };
  std::vector<std::size_t> tree;
  for (std::size_t id : order) {
    const int a = find(g.edges[id].u);
    const int b = find(g.edges[id].v);
    if (a == b) continue;
    root[static_cast<std::size_t>(a)] = b;
    tree.push_back(id);
  }
  if (tree.size() + 1 != static_cast<std::size_t>(g.n)) throw InputError("graph is disconnected");
  std::sort(tree.begin(), tree.end());
  return tree;
}

RoundingOutput run_rounding(const SplitGraph& g0, const LambdaWeights& lam, const RoundingParams& params) {
  if (params.k != g0.k()) throw InputError("rounding parameters do not match the split graph's k");
  const Multigraph graph = g0.graph();
  if (lam.graph.n != graph.n || lam.graph.edges != graph.edges)
    throw InputError("weights were fitted on a different graph");
  RoundingOutput out;

  out.trees = sample_batch(lam, static_cast<std::size_t>(params.trees), params.seed, params.threads);
  std::vector<std::vector<Edge>> tree_edges;
  for (const auto& t : out.trees) {
    std::vector<Edge> edges;
    for (std::size_t id : t.edge_ids) {
      edges.push_back(graph.edges[id]);
      out.t_star.add(graph.edges[id]);
    }
    tree_edges.push_back(std::move(edges));
  }

  const std::vector<std::size_t> base = mst(graph, g0.cost0());
  for (std::size_t id : base) {
    out.mst_cost += g0.cost0()[id];
    out.b_set.add(graph.edges[id], params.mst_copies);
  }

  const double threshold = params.threshold();
  for (const auto& edges : tree_edges) {
    const std::vector<long> counts = fundamental_cut_counts(graph.n, edges, out.t_star);
    const std::vector<char> on_path = separates_u0_v0(graph.n, edges, g0.u0(), g0.v0());
    long augments = 0;
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (on_path[j]) continue;
      ++out.eligible_pairs;
      if (static_cast<double>(counts[j]) < threshold) {
        out.f_set.add(edges[j]);
        ++augments;
      }
    }
    out.augments_per_tree.push_back(augments);
  }

  out.cost_t_star = g0.cost(out.t_star);
  out.cost_b = g0.cost(out.b_set);
  out.cost_f = g0.cost(out.f_set);
  out.final = identify_back(g0, out.t_star + out.b_set + out.f_set);
  return out;
}

}  // namespace kecsm
