#pragma once

// Dense two-phase primal simplex for small linear programs:
//   minimize c'x  subject to  rows (=, >=, <=)  and  x >= 0.

#include <cstddef>
#include <vector>

namespace kecsm::lp {

enum class Sense { kEq, kGe, kLe };

struct Row {
  std::vector<double> coef;  // dense, one entry per variable
  Sense sense = Sense::kEq;
  double rhs = 0.0;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct SimplexResult {
  Status status = Status::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  std::size_t max_pivots = 200000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_streak = 50;
};

SimplexResult solve_simplex(const LinearProgram& prog, const SimplexOptions& opts = {});

}  // namespace kecsm::lp
