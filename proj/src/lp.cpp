#include "kecsm/lp.hpp"

#include <cmath>
#include <cstdint>

#include "kecsm/simplex.hpp"

namespace kecsm {
namespace {

lp::Row cut_row(const std::vector<Edge>& edges, const CutSpec& s, int k) {
  lp::Row row;
  row.coef.assign(edges.size(), 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (s.crosses(edges[i])) row.coef[i] = 1.0;
  row.sense = lp::Sense::kGe;
  row.rhs = k;
  return row;
}

lp::LinearProgram degree_program(const MetricInstance& inst, const std::vector<Edge>& edges) {
  lp::LinearProgram prog;
  prog.num_vars = edges.size();
  prog.objective.reserve(edges.size());
  for (const Edge& e : edges) prog.objective.push_back(inst.cost(e));
  for (int v = 0; v < inst.n(); ++v) {
    lp::Row row;
    row.coef.assign(edges.size(), 0.0);
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].touches(v)) row.coef[i] = 1.0;
    row.sense = lp::Sense::kEq;
    row.rhs = inst.k();
    prog.rows.push_back(std::move(row));
  }
  return prog;
}

FractionalSolution make_solution(const MetricInstance& inst, std::vector<Edge> edges, std::vector<double> x) {
  FractionalSolution sol;
  sol.n = inst.n();
  sol.k = inst.k();
  for (double& v : x)
    if (v < 1e-11) v = 0.0;
  sol.edges = std::move(edges);
  sol.x = std::move(x);
  for (std::size_t i = 0; i < sol.edges.size(); ++i) sol.objective += sol.x[i] * inst.cost(sol.edges[i]);
  return sol;
}

void require_metric(const MetricInstance& inst) {
  const auto violations = validate_metric(inst);
  if (!violations.empty()) throw InputError("instance is not metric: " + violations.front().describe());
}

}  // namespace

double FractionalSolution::degree(int v) const {
  double d = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].touches(v)) d += x[i];
  return d;
}

double FractionalSolution::cut_value(const CutSpec& s) const {
  double d = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (s.crosses(edges[i])) d += x[i];
  return d;
}

std::vector<WeightedEdge> FractionalSolution::weighted() const {
  std::vector<WeightedEdge> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (x[i] > 0) out.push_back({edges[i], x[i]});
  return out;
}

std::optional<CutSpec> separate(int n, std::span<const WeightedEdge> x, int k) {
  MinCut cut = global_min_cut(n, x);
  if (cut.value < k - kSeparationTol) return std::move(cut.side);
  return std::nullopt;
}

LpResult solve_lp(const MetricInstance& inst, const LpOptions& opts) {
  require_metric(inst);
  const std::vector<Edge> edges = complete_edges(inst.n());
  lp::LinearProgram prog = degree_program(inst, edges);
  LPReport report;

  while (true) {
    ++report.iterations;
    const lp::SimplexResult res = lp::solve_simplex(prog);
    report.pivots += res.pivots;
    if (res.status != lp::Status::kOptimal)
      throw LpNotConverged("LP did not converge: simplex failed on the current cut set", report);
    report.objective = res.objective;

    FractionalSolution sol = make_solution(inst, edges, res.x);
    const auto weighted = sol.weighted();
    const MinCut cut = global_min_cut(inst.n(), weighted);
    report.final_min_cut = cut.value;
    if (cut.value >= inst.k() - kSeparationTol) return {std::move(sol), report};
    if (report.cuts >= opts.max_cuts) throw LpNotConverged("LP did not converge", report);
    prog.rows.push_back(cut_row(edges, cut.side, inst.k()));
    ++report.cuts;
  }
}

FractionalSolution solve_lp_enumeration(const MetricInstance& inst) {
  if (inst.n() > 12) throw InputError("enumeration LP limited to n <= 12");
  require_metric(inst);
  const int n = inst.n();
  const std::vector<Edge> edges = complete_edges(n);
  lp::LinearProgram prog = degree_program(inst, edges);
  // Sides containing vertex 0 enumerate each cut once; singletons are
  // implied by the degree rows but kept so the program is literal.
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; mask += 2)
    prog.rows.push_back(cut_row(edges, CutSpec::from_mask(n, mask), inst.k()));
  const lp::SimplexResult res = lp::solve_simplex(prog);
  if (res.status != lp::Status::kOptimal) throw ConvergenceError("enumeration LP failed");
  return make_solution(inst, edges, res.x);
}

}  // namespace kecsm
