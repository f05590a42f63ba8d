#pragma once

// Core graph types: metric instances, edges, cuts, edge multisets, and the
// global minimum cut used for separation and certification.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kecsm {

/// Absolute tolerance for floating-point comparisons in graph-core.
inline constexpr double kMetricTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input (bad file, non-metric costs, bad parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure hit its cap before meeting its stopping rule.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Undirected edge between dense vertex indices, canonicalized u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b) throw InputError("edge endpoints must be distinct");
  }

  [[nodiscard]] bool touches(int w) const { return u == w || v == w; }
  [[nodiscard]] int other(int w) const { return w == u ? v : u; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// All edges of the complete graph on n vertices in lexicographic order.
std::vector<Edge> complete_edges(int n);

/// Index of edge (u,v) in complete_edges(n).
std::size_t complete_edge_index(int n, Edge e);

/// Complete graph with symmetric costs and a connectivity requirement k.
class MetricInstance {
 public:
  MetricInstance(int n, std::vector<double> costs, int k);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] double cost(int u, int v) const { return costs_[static_cast<std::size_t>(u) * n_ + v]; }
  [[nodiscard]] double cost(Edge e) const { return cost(e.u, e.v); }
  [[nodiscard]] const std::vector<double>& costs() const { return costs_; }

  /// Same costs, different connectivity requirement.
  [[nodiscard]] MetricInstance with_k(int k) const { return {n_, costs_, k}; }

 private:
  int n_;
  std::vector<double> costs_;  // row-major n x n
  int k_;
};

struct MetricViolation {
  enum class Kind { kAsymmetric, kNonzeroDiagonal, kNegative, kTriangle };
  Kind kind;
  int u = 0, v = 0, w = 0;  // offending vertices; w only for triangle
  double excess = 0.0;

  [[nodiscard]] std::string describe() const;
};

/// Lists every violation of symmetry, zero diagonal, nonnegativity and the
/// triangle inequality cost(u,w) <= cost(u,v) + cost(v,w).
std::vector<MetricViolation> validate_metric(const MetricInstance& inst);

/// All-pairs shortest path closure of raw costs; +infinity marks an absent
/// edge. Throws InputError("instance not connected") if some pair stays
/// unreachable.
MetricInstance metric_closure(int n, std::span<const double> raw_costs, int k);

/// A proper nonempty vertex subset S of {0..n-1}.
class CutSpec {
 public:
  CutSpec(int n, std::vector<int> members);
  static CutSpec from_mask(int n, std::uint64_t mask);

  [[nodiscard]] int n() const { return static_cast<int>(inside_.size()); }
  [[nodiscard]] bool contains(int v) const { return inside_[static_cast<std::size_t>(v)] != 0; }
  [[nodiscard]] bool crosses(Edge e) const { return contains(e.u) != contains(e.v); }
  [[nodiscard]] std::vector<int> members() const;

 private:
  std::vector<char> inside_;
};

/// Multiset of edges with positive integer multiplicities.
class MultiEdgeSet {
 public:
  MultiEdgeSet() = default;

  void add(Edge e, long copies = 1);
  [[nodiscard]] long multiplicity(Edge e) const;
  /// Total number of edges counted with multiplicity.
  [[nodiscard]] long size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }
  [[nodiscard]] const std::map<Edge, long>& entries() const { return counts_; }

  MultiEdgeSet& operator+=(const MultiEdgeSet& other);
  friend MultiEdgeSet operator+(MultiEdgeSet a, const MultiEdgeSet& b) { return a += b; }
  friend bool operator==(const MultiEdgeSet&, const MultiEdgeSet&) = default;

  /// Sum of multiplicity * cost(e) for any cost callable on Edge.
  template <class CostFn>
  [[nodiscard]] double cost(CostFn&& fn) const {
    double total = 0.0;
    for (const auto& [e, m] : counts_) total += static_cast<double>(m) * fn(e);
    return total;
  }

 private:
  std::map<Edge, long> counts_;
  long size_ = 0;
};

/// Number of edges (with multiplicity) crossing the cut.
long cut_size(const MultiEdgeSet& m, const CutSpec& s);

/// Edge list that may contain parallel edges; edges are addressed by index.
struct Multigraph {
  int n = 0;
  std::vector<Edge> edges;
};

struct WeightedEdge {
  Edge e;
  double w = 0.0;
};

struct MinCut {
  double value = 0.0;
  CutSpec side;
};

/// Stoer-Wagner global minimum cut. Deterministic: each phase starts from
/// the lowest-indexed surviving super-vertex and breaks ties by index.
/// Disconnected graphs yield value 0.
MinCut global_min_cut(int n, std::span<const WeightedEdge> edges);

}  // namespace kecsm
