#pragma once

// lambda-uniform spanning tree distributions: P[T] proportional to the
// product of lam(e) over e in T. Marginals come from effective resistances
// of the weighted Laplacian; fit_max_entropy finds weights whose marginals
// are dominated by a point z of the spanning tree polytope.

#include <cstddef>
#include <span>
#include <vector>

#include "kecsm/graph.hpp"

namespace kecsm {

struct MarginalVector {
  std::vector<double> p;  // P[e in T], aligned with the graph's edges
};

/// p_e = lam_e * R_eff(e). Throws InputError if the graph is disconnected
/// under the positive-weight edges.
MarginalVector tree_marginals(const Multigraph& g, std::span<const double> lam);

/// Effective resistance across edge `edge` with conductances lam.
double effective_resistance(const Multigraph& g, std::span<const double> lam, std::size_t edge);

/// Weighted spanning tree count sum_T prod_{e in T} lam_e (Kirchhoff).
double spanning_tree_count(const Multigraph& g, std::span<const double> lam);

/// One block of the fitted distribution: a tree of `graph` drawn from the
/// lam-uniform law on it. Vertices of `graph` are contracted vertex classes
/// of the parent graph and edge_ids index the parent's edges.
struct FitLevel {
  Multigraph graph;
  std::vector<std::size_t> edge_ids;
  std::vector<double> lam;
};

/// Fitted distribution. When z touches faces of the polytope (tight vertex
/// sets), the law is the limit of lam-uniform laws with the weights inside
/// each tight set scaled to infinity: independent lam-uniform trees, one per
/// level, whose union is a spanning tree of the parent graph.
struct LambdaWeights {
  Multigraph graph;
  std::vector<double> lam;               // per edge; 0 outside the support
  std::vector<int> level_of_edge;        // -1 outside the support
  std::vector<double> fitted_marginals;  // per edge
  std::vector<FitLevel> levels;          // innermost tight sets first
  double epsilon_marginal = 1e-6;
  double max_ratio = 0.0;                // max over support of p_e / z_e
  std::size_t updates = 0;               // coordinate updates performed
};

struct FitOptions {
  double epsilon_marginal = 1e-6;
  std::size_t max_iters = 100000;
};

/// Fits weights with fitted_marginals_e <= z_e (1 + epsilon_marginal) for all
/// edges. Edges with z_e <= 1e-12 are dropped. Throws InputError when z is
/// outside the spanning tree polytope and ConvergenceError past max_iters.
LambdaWeights fit_max_entropy(const Multigraph& g, std::span<const double> z, const FitOptions& opts = {});

}  // namespace kecsm
