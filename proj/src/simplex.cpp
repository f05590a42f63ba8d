#include "kecsm/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kecsm::lp {
namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc, std::vector<double>& cost_row) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double f = cost_row[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= cols_; ++c) cost_row[c] -= f * at(pr, c);
      cost_row[pc] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

struct Phase {
  Tableau& t;
  std::vector<std::size_t>& basis;
  std::vector<char> allowed;  // columns permitted to enter
  const SimplexOptions& opts;
  std::size_t& pivots;

  // cost_row[c] holds the reduced cost of column c; cost_row[cols] holds -objective.
  Status run(std::vector<double>& cost_row) {
    std::size_t degenerate = 0;
    while (true) {
      const bool bland = degenerate >= opts.degenerate_streak;
      std::size_t enter = t.cols();
      double most = -opts.cost_tol;
      for (std::size_t c = 0; c < t.cols(); ++c) {
        if (!allowed[c]) continue;
        if (cost_row[c] < most) {
          enter = c;
          most = cost_row[c];
          if (bland) break;
        }
      }
      if (enter == t.cols()) return Status::kOptimal;

      std::size_t leave = t.rows();
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double a = t.at(r, enter);
        if (a <= opts.pivot_tol) continue;
        const double ratio = t.rhs(r) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && leave < t.rows() && basis[r] < basis[leave])) {
          best_ratio = std::min(ratio, best_ratio);
          leave = r;
        }
      }
      if (leave == t.rows()) return Status::kUnbounded;
      if (++pivots > opts.max_pivots) return Status::kIterationLimit;
      degenerate = best_ratio <= 1e-12 ? degenerate + 1 : 0;
      t.pivot(leave, enter, cost_row);
      basis[leave] = enter;
    }
  }
};

}  // namespace

SimplexResult solve_simplex(const LinearProgram& prog, const SimplexOptions& opts) {
  const std::size_t n = prog.num_vars;
  if (prog.objective.size() != n) throw std::invalid_argument("objective size mismatch");

  // Column layout: [structural | slack/surplus | artificial]
  std::size_t num_slack = 0;
  std::size_t num_art = 0;
  for (const auto& row : prog.rows) {
    if (row.coef.size() != n) throw std::invalid_argument("row size mismatch");
    const bool flip = row.rhs < 0;
    Sense s = row.sense;
    if (flip && s != Sense::kEq) s = s == Sense::kGe ? Sense::kLe : Sense::kGe;
    if (s != Sense::kEq) ++num_slack;
    if (s != Sense::kLe) ++num_art;
  }
  const std::size_t m = prog.rows.size();
  const std::size_t cols = n + num_slack + num_art;
  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<char> is_art(cols, 0);

  std::size_t slack_col = n;
  std::size_t art_col = n + num_slack;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = prog.rows[r];
    const double sign = row.rhs < 0 ? -1.0 : 1.0;
    Sense s = row.sense;
    if (sign < 0 && s != Sense::kEq) s = s == Sense::kGe ? Sense::kLe : Sense::kGe;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * row.coef[c];
    t.rhs(r) = sign * row.rhs;
    if (s == Sense::kLe) {
      t.at(r, slack_col) = 1.0;
      basis[r] = slack_col++;
    } else {
      if (s == Sense::kGe) t.at(r, slack_col++) = -1.0;
      t.at(r, art_col) = 1.0;
      is_art[art_col] = 1;
      basis[r] = art_col++;
    }
  }

  SimplexResult result;
  std::size_t pivots = 0;

  // Phase I: minimize the sum of artificials.
  std::vector<double> cost_row(cols + 1, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (!is_art[basis[r]]) continue;
    for (std::size_t c = 0; c < cols; ++c)
      if (!is_art[c]) cost_row[c] -= t.at(r, c);
    cost_row[cols] -= t.rhs(r);
  }
  {
    Phase phase{t, basis, std::vector<char>(cols, 1), opts, pivots};
    const Status st = phase.run(cost_row);
    if (st == Status::kIterationLimit) {
      result.status = st;
      result.pivots = pivots;
      return result;
    }
  }
  double scale = 1.0;
  for (const auto& row : prog.rows) scale = std::max(scale, std::abs(row.rhs));
  if (-cost_row[cols] > 1e-7 * scale) {
    result.status = Status::kInfeasible;
    result.pivots = pivots;
    return result;
  }

  // Drive zero-level artificials out of the basis; rows that cannot pivot are redundant.
  std::vector<char> redundant(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (!is_art[basis[r]]) continue;
    std::size_t pc = cols;
    for (std::size_t c = 0; c < cols; ++c)
      if (!is_art[c] && std::abs(t.at(r, c)) > opts.pivot_tol) {
        pc = c;
        break;
      }
    if (pc == cols) {
      redundant[r] = 1;
      continue;
    }
    std::vector<double> dummy(cols + 1, 0.0);
    t.pivot(r, pc, dummy);
    basis[r] = pc;
  }

  // Phase II
  std::fill(cost_row.begin(), cost_row.end(), 0.0);
  for (std::size_t c = 0; c < n; ++c) cost_row[c] = prog.objective[c];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = basis[r];
    if (redundant[r] || b >= n) continue;
    const double cb = prog.objective[b];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) cost_row[c] -= cb * t.at(r, c);
  }
  std::vector<char> allowed(cols, 1);
  for (std::size_t c = 0; c < cols; ++c)
    if (is_art[c]) allowed[c] = 0;
  Phase phase{t, basis, std::move(allowed), opts, pivots};
  const Status st = phase.run(cost_row);
  result.pivots = pivots;
  result.status = st;
  if (st != Status::kOptimal) return result;

  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) result.x[basis[r]] = t.rhs(r);
  result.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) result.objective += prog.objective[c] * result.x[c];
  return result;
}

}  // namespace kecsm::lp
