#pragma once

// Exact spanning tree samplers for lambda-uniform laws: Wilson's
// loop-erased random walk, plus an enumeration sampler for small graphs.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "kecsm/graph.hpp"
#include "kecsm/tree_dist.hpp"

namespace kecsm {

/// Reproducible random stream: the same (seed, stream) pair always yields
/// the same engine state, and distinct streams are seeded independently.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] std::mt19937_64 engine() const;
};

/// Edge indices into the sampled graph, sorted ascending.
struct SpanningTree {
  std::vector<std::size_t> edge_ids;
};

/// True iff edge_ids form a spanning tree of g.
bool is_spanning_tree(const Multigraph& g, const SpanningTree& t);

/// Wilson's algorithm rooted at vertex 0; the walk leaves a vertex along an
/// incident edge with probability proportional to lam.
SpanningTree sample_tree(const Multigraph& g, std::span<const double> lam, std::mt19937_64& rng);
SpanningTree sample_tree(const Multigraph& g, std::span<const double> lam, const RngStream& rng);

/// Tree of the fitted distribution: one Wilson sample per level, mapped back
/// to edges of w.graph.
SpanningTree sample_tree(const LambdaWeights& w, const RngStream& rng);

/// All spanning trees of g (edge index sets). Limited to 8 vertices.
std::vector<SpanningTree> enumerate_spanning_trees(const Multigraph& g);

/// Draws from the explicit distribution over enumerate_spanning_trees(g).
SpanningTree sample_tree_enumeration(const Multigraph& g, std::span<const double> lam, const RngStream& rng);

/// t trees from streams 0..t-1 of seed. The result does not depend on
/// whether streams run sequentially or on several threads.
std::vector<SpanningTree> sample_batch(const LambdaWeights& w, std::size_t t, std::uint64_t seed,
                                       unsigned threads = 1);

}  // namespace kecsm
