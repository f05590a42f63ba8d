#pragma once

// LP relaxation of k-ECSM on a metric instance:
//   min sum_e c(e) x_e  s.t.  x(delta(v)) = k,  x(delta(S)) >= k,  x >= 0.
// Solved by cutting planes over a min-cut separation oracle.

#include <cstddef>
#include <optional>
#include <vector>

#include "kecsm/graph.hpp"

namespace kecsm {

/// Violation threshold used by the separation oracle.
inline constexpr double kSeparationTol = 1e-7;

/// Edge values x over complete_edges(n).
struct FractionalSolution {
  int n = 0;
  int k = 0;
  std::vector<Edge> edges;
  std::vector<double> x;
  double objective = 0.0;

  [[nodiscard]] double value(Edge e) const { return x[complete_edge_index(n, e)]; }
  [[nodiscard]] double degree(int v) const;
  [[nodiscard]] double cut_value(const CutSpec& s) const;
  [[nodiscard]] std::vector<WeightedEdge> weighted() const;
};

struct LPReport {
  double objective = 0.0;
  std::size_t iterations = 0;   // LP re-solves
  std::size_t cuts = 0;         // generated cut constraints
  std::size_t pivots = 0;
  double final_min_cut = 0.0;   // global min cut of x at termination
};

class LpNotConverged : public ConvergenceError {
 public:
  LpNotConverged(const std::string& what, LPReport partial)
      : ConvergenceError(what), report_(partial) {}
  [[nodiscard]] const LPReport& report() const { return report_; }

 private:
  LPReport report_;
};

struct LpOptions {
  std::size_t max_cuts = 10000;
};

struct LpResult {
  FractionalSolution solution;
  LPReport report;
};

/// Cutting-plane solve. Starts from the degree equalities and adds the
/// global minimum cut of the current x while it is violated.
LpResult solve_lp(const MetricInstance& inst, const LpOptions& opts = {});

/// Returns a side S with x(delta(S)) < k - kSeparationTol, if any.
std::optional<CutSpec> separate(int n, std::span<const WeightedEdge> x, int k);

/// Reference LP with every cut constraint materialized. Requires n <= 12.
FractionalSolution solve_lp_enumeration(const MetricInstance& inst);

}  // namespace kecsm
