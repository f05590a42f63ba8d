#pragma once

// Vertex split G -> G0: one vertex u becomes u0 and v0, each incident edge
// (u,w) becomes (u0,w) and (v0,w) carrying half of x(u,w). Spanning trees
// of G0 are 1-trees of G.

#include <cstddef>
#include <vector>

#include "kecsm/graph.hpp"
#include "kecsm/lp.hpp"

namespace kecsm {

/// Expanded graph G0. Vertex u0 keeps the split vertex's index and v0 is
/// the new vertex n; all other vertices keep their indices.
class SplitGraph {
 public:
  SplitGraph(const MetricInstance& inst, const FractionalSolution& x, int split_vertex);

  [[nodiscard]] int n0() const { return n0_; }
  [[nodiscard]] int u0() const { return u0_; }
  [[nodiscard]] int v0() const { return v0_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const std::vector<double>& x0() const { return x0_; }
  [[nodiscard]] const std::vector<double>& cost0() const { return cost0_; }
  [[nodiscard]] Multigraph graph() const { return {n0_, edges_}; }

  /// Vertex of G that a G0 vertex maps back to.
  [[nodiscard]] int origin_vertex(int w) const { return w == v0_ ? u0_ : w; }
  [[nodiscard]] Edge origin(Edge e) const { return {origin_vertex(e.u), origin_vertex(e.v)}; }
  [[nodiscard]] std::size_t index(Edge e) const;
  [[nodiscard]] double cost(Edge e) const { return cost0_[index(e)]; }
  [[nodiscard]] double cost(const MultiEdgeSet& m) const {
    return m.cost([this](Edge e) { return cost(e); });
  }

 private:
  int n0_;
  int u0_;
  int v0_;
  int k_;
  std::vector<Edge> edges_;  // complete graph on n0 vertices minus (u0,v0)
  std::vector<double> x0_;
  std::vector<double> cost0_;
};

inline SplitGraph build_split_graph(const MetricInstance& inst, const FractionalSolution& x, int split_vertex = 0) {
  return {inst, x, split_vertex};
}

/// Point z = (2/k) x0 aligned with SplitGraph::edges().
struct TreePolytopePoint {
  int n0 = 0;
  std::vector<Edge> edges;
  std::vector<double> z;

  [[nodiscard]] double total() const;
};

TreePolytopePoint to_tree_point(const SplitGraph& g0);

struct PolytopeViolation {
  std::vector<int> subset;  // whole vertex set for the equality z(E) = n0 - 1
  double lhs = 0.0;          // z(E(S))
  double rhs = 0.0;          // |S| - 1
};

/// Exhaustive check of z(E) = |V|-1, z(E(S)) <= |S|-1 and z >= 0 within 1e-6.
/// Throws InputError("enumeration infeasible") for more than 14 vertices.
std::vector<PolytopeViolation> check_tree_polytope(const TreePolytopePoint& z);

/// Merges (u0,w) and (v0,w) multiplicities onto (u,w).
MultiEdgeSet identify_back(const SplitGraph& g0, const MultiEdgeSet& m0);

}  // namespace kecsm
