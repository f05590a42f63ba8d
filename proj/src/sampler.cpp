#include "kecsm/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace kecsm {
namespace {

struct Arc {
  std::size_t edge;
  int to;
};

struct WalkTable {
  std::vector<std::vector<Arc>> arcs;
  std::vector<std::vector<double>> cumulative;

  WalkTable(const Multigraph& g, std::span<const double> lam)
      : arcs(static_cast<std::size_t>(g.n)), cumulative(static_cast<std::size_t>(g.n)) {
    if (lam.size() != g.edges.size()) throw InputError("weight vector does not match edge count");
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (!(lam[i] > 0)) continue;
      const Edge e = g.edges[i];
      push(e.u, {i, e.v}, lam[i]);
      push(e.v, {i, e.u}, lam[i]);
    }
  }

  void push(int v, Arc a, double w) {
    auto& c = cumulative[static_cast<std::size_t>(v)];
    c.push_back((c.empty() ? 0.0 : c.back()) + w);
    arcs[static_cast<std::size_t>(v)].push_back(a);
  }

  const Arc& step(int v, std::mt19937_64& rng) const {
    const auto& c = cumulative[static_cast<std::size_t>(v)];
    std::uniform_real_distribution<double> u(0.0, c.back());
    const double r = u(rng);
    auto it = std::upper_bound(c.begin(), c.end(), r);
    if (it == c.end()) --it;
    return arcs[static_cast<std::size_t>(v)][static_cast<std::size_t>(it - c.begin())];
  }
};

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
  int find(int v) {
    while (p[static_cast<std::size_t>(v)] != v) v = p[static_cast<std::size_t>(v)];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

void enumerate_from(const Multigraph& g, std::size_t start, std::vector<std::size_t>& chosen, const Dsu& dsu,
                    std::vector<SpanningTree>& out) {
  const auto need = static_cast<std::size_t>(g.n - 1);
  if (chosen.size() == need) {
    out.push_back({chosen});
    return;
  }
  for (std::size_t i = start; i + (need - chosen.size()) <= g.edges.size(); ++i) {
    Dsu next = dsu;
    if (!next.unite(g.edges[i].u, g.edges[i].v)) continue;
    chosen.push_back(i);
    enumerate_from(g, i + 1, chosen, next, out);
    chosen.pop_back();
  }
}

}  // namespace

std::mt19937_64 RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6b65636dU};
  return std::mt19937_64(seq);
}

bool is_spanning_tree(const Multigraph& g, const SpanningTree& t) {
  if (t.edge_ids.size() != static_cast<std::size_t>(g.n - 1)) return false;
  Dsu dsu(g.n);
  for (std::size_t id : t.edge_ids) {
    if (id >= g.edges.size()) return false;
    if (!dsu.unite(g.edges[id].u, g.edges[id].v)) return false;
  }
  return true;
}

SpanningTree sample_tree(const Multigraph& g, std::span<const double> lam, std::mt19937_64& rng) {
  const WalkTable table(g, lam);
  const auto n = static_cast<std::size_t>(g.n);
  for (std::size_t v = 0; v < n; ++v)
    if (table.arcs[v].empty() && n > 1) throw InputError("graph is disconnected under positive weights");

  std::vector<char> in_tree(n, 0);
  std::vector<Arc> next(n);
  in_tree[0] = 1;
  SpanningTree tree;
  tree.edge_ids.reserve(n - 1);
  // A walk that cannot reach the root would never stop; cap it.
  const std::size_t cap = 1000000 * (n + 1);
  for (std::size_t start = 1; start < n; ++start) {
    std::size_t steps = 0;
    for (int u = static_cast<int>(start); !in_tree[static_cast<std::size_t>(u)]; u = next[static_cast<std::size_t>(u)].to) {
      next[static_cast<std::size_t>(u)] = table.step(u, rng);
      if (++steps > cap) throw InputError("graph is disconnected under positive weights");
    }
    for (int u = static_cast<int>(start); !in_tree[static_cast<std::size_t>(u)]; u = next[static_cast<std::size_t>(u)].to) {
      in_tree[static_cast<std::size_t>(u)] = 1;
      tree.edge_ids.push_back(next[static_cast<std::size_t>(u)].edge);
    }
  }
  std::sort(tree.edge_ids.begin(), tree.edge_ids.end());
  return tree;
}

SpanningTree sample_tree(const Multigraph& g, std::span<const double> lam, const RngStream& rng) {
  auto engine = rng.engine();
  return sample_tree(g, lam, engine);
}

SpanningTree sample_tree(const LambdaWeights& w, const RngStream& rng) {
  auto engine = rng.engine();
  SpanningTree tree;
  for (const FitLevel& level : w.levels) {
    const SpanningTree local = sample_tree(level.graph, level.lam, engine);
    for (std::size_t id : local.edge_ids) tree.edge_ids.push_back(level.edge_ids[id]);
  }
  std::sort(tree.edge_ids.begin(), tree.edge_ids.end());
  return tree;
}

std::vector<SpanningTree> enumerate_spanning_trees(const Multigraph& g) {
  if (g.n > 8) throw InputError("tree enumeration limited to 8 vertices");
  std::vector<SpanningTree> out;
  if (g.n <= 1) return {SpanningTree{}};
  std::vector<std::size_t> chosen;
  enumerate_from(g, 0, chosen, Dsu(g.n), out);
  return out;
}

SpanningTree sample_tree_enumeration(const Multigraph& g, std::span<const double> lam, const RngStream& rng) {
  if (lam.size() != g.edges.size()) throw InputError("weight vector does not match edge count");
  const std::vector<SpanningTree> trees = enumerate_spanning_trees(g);
  std::vector<double> weight;
  weight.reserve(trees.size());
  for (const auto& t : trees) {
    double w = 1.0;
    for (std::size_t id : t.edge_ids) w *= lam[id];
    weight.push_back(w);
  }
  std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
  auto engine = rng.engine();
  if (trees.empty() || std::accumulate(weight.begin(), weight.end(), 0.0) <= 0)
    throw InputError("graph is disconnected under positive weights");
  return trees[pick(engine)];
}

std::vector<SpanningTree> sample_batch(const LambdaWeights& w, std::size_t t, std::uint64_t seed, unsigned threads) {
  if (t == 0) throw InputError("tree count must be positive");
  std::vector<SpanningTree> out(t);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(t)));
  if (threads == 1) {
    for (std::size_t i = 0; i < t; ++i) out[i] = sample_tree(w, RngStream{seed, i});
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned tid = 0; tid < threads; ++tid)
      pool.emplace_back([&, tid] {
        try {
          for (std::size_t i = tid; i < t; i += threads) out[i] = sample_tree(w, RngStream{seed, i});
        } catch (...) {
          errors[tid] = std::current_exception();
        }
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace kecsm
