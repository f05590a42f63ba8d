#include <doctest.h>

#include <random>

#include "kecsm/lp.hpp"
#include "kecsm/simplex.hpp"
#include "oracles.hpp"

using namespace kecsm;

namespace {

MetricInstance four_cycle_metric(int k) {
  // cycle edges cost 1, diagonals 2
  std::vector<double> c(16, 1.0);
  for (int v = 0; v < 4; ++v) c[static_cast<std::size_t>(v * 5)] = 0.0;
  c[0 * 4 + 2] = c[2 * 4 + 0] = 2.0;
  c[1 * 4 + 3] = c[3 * 4 + 1] = 2.0;
  return {4, c, k};
}

void check_feasible(const FractionalSolution& x) {
  for (double v : x.x) CHECK(v >= 0.0);
  for (int v = 0; v < x.n; ++v) CHECK(x.degree(v) == doctest::Approx(x.k).epsilon(1e-9));
  const auto mc = global_min_cut(x.n, x.weighted());
  CHECK(mc.value >= x.k - 1e-6);
}

}  // namespace

TEST_CASE("simplex on small programs") {
  using namespace kecsm::lp;
  SUBCASE("bounded minimum") {
    // min x + y  s.t. x + 2y >= 4, 3x + y >= 6
    LinearProgram p{2, {1, 1}, {{{1, 2}, Sense::kGe, 4}, {{3, 1}, Sense::kGe, 6}}};
    const auto r = solve_simplex(p);
    REQUIRE(r.status == Status::kOptimal);
    CHECK(r.objective == doctest::Approx(2.8));
    CHECK(r.x[0] == doctest::Approx(1.6));
    CHECK(r.x[1] == doctest::Approx(1.2));
  }
  SUBCASE("infeasible") {
    LinearProgram p{1, {1}, {{{1}, Sense::kLe, 1}, {{1}, Sense::kGe, 2}}};
    CHECK(solve_simplex(p).status == Status::kInfeasible);
  }
  SUBCASE("unbounded") {
    LinearProgram p{2, {-1, 0}, {{{1, -1}, Sense::kLe, 1}}};
    CHECK(solve_simplex(p).status == Status::kUnbounded);
  }
  SUBCASE("redundant equalities") {
    LinearProgram p{2, {1, 2}, {{{1, 1}, Sense::kEq, 3}, {{2, 2}, Sense::kEq, 6}}};
    const auto r = solve_simplex(p);
    REQUIRE(r.status == Status::kOptimal);
    CHECK(r.objective == doctest::Approx(3.0));
  }
}

TEST_CASE("solve_lp examples") {
  SUBCASE("triangle k=2") {
    const auto r = solve_lp(oracle::uniform_instance(3, 2));
    CHECK(r.report.objective == doctest::Approx(3.0));
    for (double v : r.solution.x) CHECK(v == doctest::Approx(1.0));
    CHECK(oracle::integral_opt(oracle::uniform_instance(3, 2), 2) == doctest::Approx(3.0));
  }
  SUBCASE("two vertices k=4") {
    const auto r = solve_lp(MetricInstance(2, {0, 5, 5, 0}, 4));
    CHECK(r.solution.x.at(0) == doctest::Approx(4.0));
    CHECK(r.report.objective == doctest::Approx(20.0));
  }
  SUBCASE("K4 k=2") {
    const auto r = solve_lp(oracle::uniform_instance(4, 2));
    CHECK(r.report.objective == doctest::Approx(4.0));
    check_feasible(r.solution);
  }
  SUBCASE("non-metric input is rejected") {
    CHECK_THROWS_AS(solve_lp(MetricInstance(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}, 2)), InputError);
  }
}

TEST_CASE("separate examples") {
  std::vector<WeightedEdge> tri{{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}};
  CHECK_FALSE(separate(3, tri, 2).has_value());
  const auto cut = separate(3, tri, 3);
  REQUIRE(cut.has_value());
  double v = 0;
  for (const auto& e : tri)
    if (cut->crosses(e.e)) v += e.w;
  CHECK(v == doctest::Approx(2.0));

  std::vector<WeightedEdge> star{{{0, 1}, 2}, {{0, 2}, 2}, {{1, 2}, 0}};
  CHECK_FALSE(separate(3, star, 2).has_value());
}

TEST_CASE("solve_lp_enumeration examples") {
  CHECK(solve_lp_enumeration(oracle::uniform_instance(3, 2)).objective == doctest::Approx(3.0));
  CHECK(solve_lp_enumeration(MetricInstance(2, {0, 5, 5, 0}, 3)).objective == doctest::Approx(15.0));
  CHECK(solve_lp_enumeration(four_cycle_metric(2)).objective == doctest::Approx(4.0));
  CHECK(solve_lp(four_cycle_metric(2)).report.objective == doctest::Approx(4.0));
  CHECK_THROWS_AS(solve_lp_enumeration(oracle::uniform_instance(13, 2)), InputError);
}

TEST_CASE("cutting planes agree with full enumeration") {
  int checked = 0;
  for (int n = 3; n <= 8; ++n)
    for (int k : {2, 3, 4, 7}) {
      const auto inst = oracle::euclidean_instance(n, k, static_cast<std::uint64_t>(100 * n + k));
      const auto cp = solve_lp(inst);
      const auto en = solve_lp_enumeration(inst);
      CHECK(std::abs(cp.report.objective - en.objective) <= 1e-5 * (1 + en.objective));
      check_feasible(cp.solution);
      check_feasible(en);
      CHECK(cp.report.final_min_cut >= k - 1e-6);
      ++checked;
    }
  CHECK(checked == 24);
}

TEST_CASE("LP objective is at most the integral optimum") {
  for (int k = 2; k <= 4; ++k)
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto inst = oracle::euclidean_instance(3, k, seed);
      CHECK(solve_lp(inst).report.objective <= oracle::integral_opt(inst, k) + 1e-7);
    }
}

TEST_CASE("cut cap reports non-convergence") {
  LpOptions opts;
  opts.max_cuts = 0;
  const auto inst = oracle::euclidean_instance(9, 4, 3);
  bool needs_cuts = false;
  try {
    solve_lp(inst, opts);
  } catch (const LpNotConverged& e) {
    needs_cuts = true;
    CHECK(std::string(e.what()).find("LP did not converge") != std::string::npos);
    CHECK(e.report().final_min_cut < 4 - kSeparationTol);
  }
  if (!needs_cuts) CHECK(solve_lp(inst).report.cuts == 0);
}
