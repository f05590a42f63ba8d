#include "kecsm/split.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace kecsm {

SplitGraph::SplitGraph(const MetricInstance& inst, const FractionalSolution& x, int split_vertex)
    : n0_(inst.n() + 1), u0_(split_vertex), v0_(inst.n()), k_(inst.k()) {
  if (split_vertex < 0 || split_vertex >= inst.n()) throw InputError("split vertex out of range");
  if (x.n != inst.n()) throw InputError("fractional solution does not match instance");
  for (Edge e : complete_edges(n0_)) {
    if (e == Edge(u0_, v0_)) continue;
    const Edge orig = origin(e);
    double value = x.value(orig);
    if (orig.touches(u0_)) value /= 2.0;
    edges_.push_back(e);
    x0_.push_back(value);
    cost0_.push_back(inst.cost(orig));
  }
}

std::size_t SplitGraph::index(Edge e) const {
  if (e.v >= n0_ || e == Edge(u0_, v0_)) throw InputError("edge not in split graph");
  // complete_edges order with (u0,v0) removed
  const std::size_t full = complete_edge_index(n0_, e);
  const std::size_t gap = complete_edge_index(n0_, Edge(u0_, v0_));
  return full > gap ? full - 1 : full;
}

double TreePolytopePoint::total() const {
  double s = 0.0;
  for (double v : z) s += v;
  return s;
}

TreePolytopePoint to_tree_point(const SplitGraph& g0) {
  TreePolytopePoint p{g0.n0(), g0.edges(), {}};
  p.z.reserve(g0.x0().size());
  const double scale = 2.0 / g0.k();
  for (double v : g0.x0()) p.z.push_back(scale * v);
  return p;
}

std::vector<PolytopeViolation> check_tree_polytope(const TreePolytopePoint& z) {
  constexpr double tol = 1e-6;
  const int n = z.n0;
  if (n > 14) throw InputError("enumeration infeasible");
  std::vector<PolytopeViolation> out;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;

  for (std::size_t i = 0; i < z.z.size(); ++i)
    if (z.z[i] < -tol) out.push_back({{z.edges[i].u, z.edges[i].v}, z.z[i], 0.0});

  const double total = z.total();
  if (std::abs(total - (n - 1)) > tol) out.push_back({all, total, static_cast<double>(n - 1)});

  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singletons hold trivially
    double inside = 0.0;
    for (std::size_t i = 0; i < z.edges.size(); ++i)
      if ((mask >> z.edges[i].u & 1U) && (mask >> z.edges[i].v & 1U)) inside += z.z[i];
    const int size = std::popcount(mask);
    if (inside > size - 1 + tol) {
      std::vector<int> subset;
      for (int v = 0; v < n; ++v)
        if (mask >> v & 1U) subset.push_back(v);
      out.push_back({std::move(subset), inside, static_cast<double>(size - 1)});
    }
  }
  return out;
}

MultiEdgeSet identify_back(const SplitGraph& g0, const MultiEdgeSet& m0) {
  MultiEdgeSet out;
  for (const auto& [e, m] : m0.entries()) out.add(g0.origin(e), m);
  return out;
}

}  // namespace kecsm
