#pragma once

// Randomized rounding of a k-ECSM LP optimum: union of ceil(k/2) sampled
// trees, plus b copies of the MST, plus one extra copy of each tree edge
// whose fundamental cut is light in the union and keeps u0, v0 together.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kecsm/graph.hpp"
#include "kecsm/sampler.hpp"
#include "kecsm/split.hpp"
#include "kecsm/tree_dist.hpp"

namespace kecsm {

struct RoundingParams {
  int k = 2;
  double alpha = 0.0;
  int trees = 1;      // t = ceil(k/2)
  long mst_copies = 0;  // b = ceil(alpha * sqrt(k/2 - 1))
  std::uint64_t seed = 0;
  unsigned threads = 1;

  /// alpha defaults to sqrt(ln(k/2)) for k >= 4 and 0 for k in {2,3}; any
  /// alpha is clamped to sqrt(max(k/2 - 1, 0)).
  static RoundingParams make(int k, std::optional<double> alpha, std::uint64_t seed);

  /// k - alpha * sqrt(k/2 - 1); tree edges with a lighter fundamental cut
  /// get augmented.
  [[nodiscard]] double threshold() const;
};

struct RoundingOutput {
  MultiEdgeSet t_star;  // over G0
  MultiEdgeSet b_set;   // over G0
  MultiEdgeSet f_set;   // over G0
  MultiEdgeSet final;   // over G
  double cost_t_star = 0.0;
  double cost_b = 0.0;
  double cost_f = 0.0;
  double mst_cost = 0.0;
  std::vector<SpanningTree> trees;
  std::vector<long> augments_per_tree;
  long eligible_pairs = 0;  // (i, e in T_i) with u0, v0 on one side of C_{T_i}(e)

  [[nodiscard]] double total_cost() const { return cost_t_star + cost_b + cost_f; }
  [[nodiscard]] long augmentations() const { return f_set.size(); }
};

/// For each edge of the tree, the number of multiset edges (with
/// multiplicity) crossing the cut left by deleting it. Path-increment form:
/// every multiset edge (a,b) adds its multiplicity to the tree path a..b.
std::vector<long> fundamental_cut_counts(int n, std::span<const Edge> tree, const MultiEdgeSet& m);

/// Per tree edge, whether it lies on the tree path between u0 and v0.
std::vector<char> separates_u0_v0(int n, std::span<const Edge> tree, int u0, int v0);

/// Minimum spanning tree by Kruskal, ties broken by edge order.
std::vector<std::size_t> mst(const Multigraph& g, std::span<const double> cost);

RoundingOutput run_rounding(const SplitGraph& g0, const LambdaWeights& lam, const RoundingParams& params);

}  // namespace kecsm
