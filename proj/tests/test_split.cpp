#include <doctest.h>

#include <random>

#include "kecsm/lp.hpp"
#include "kecsm/split.hpp"
#include "oracles.hpp"

using namespace kecsm;

namespace {

FractionalSolution make_x(int n, int k, const std::vector<std::pair<Edge, double>>& values) {
  FractionalSolution x;
  x.n = n;
  x.k = k;
  x.edges = complete_edges(n);
  x.x.assign(x.edges.size(), 0.0);
  for (const auto& [e, v] : values) x.x[complete_edge_index(n, e)] = v;
  return x;
}

double x0_of(const SplitGraph& g, Edge e) { return g.x0()[g.index(e)]; }

double degree0(const SplitGraph& g, int v) {
  double d = 0;
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    if (g.edges()[i].touches(v)) d += g.x0()[i];
  return d;
}

}  // namespace

TEST_CASE("build_split_graph examples") {
  SUBCASE("triangle") {
    const auto inst = oracle::uniform_instance(3, 2);
    const auto g = build_split_graph(inst, make_x(3, 2, {{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}}));
    CHECK(g.n0() == 4);
    CHECK(g.u0() == 0);
    CHECK(g.v0() == 3);
    CHECK(g.edges().size() == 5);
    CHECK(x0_of(g, {0, 1}) == doctest::Approx(0.5));
    CHECK(x0_of(g, {3, 1}) == doctest::Approx(0.5));
    CHECK(x0_of(g, {0, 2}) == doctest::Approx(0.5));
    CHECK(x0_of(g, {3, 2}) == doctest::Approx(0.5));
    CHECK(x0_of(g, {1, 2}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(static_cast<void>(g.index({0, 3})), InputError);
    CHECK(g.cost({3, 1}) == inst.cost(0, 1));

    const auto z = to_tree_point(g);
    CHECK(z.total() == doctest::Approx(3.0));
    CHECK(check_tree_polytope(z).empty());
  }
  SUBCASE("two vertices") {
    const int k = 6;
    const auto g = build_split_graph(MetricInstance(2, {0, 5, 5, 0}, k), make_x(2, k, {{{0, 1}, k}}));
    CHECK(x0_of(g, {0, 1}) == doctest::Approx(3.0));
    CHECK(x0_of(g, {2, 1}) == doctest::Approx(3.0));
    const auto z = to_tree_point(g);
    for (double v : z.z) CHECK(v == doctest::Approx(1.0));
    CHECK(z.total() == doctest::Approx(2.0));
  }
  SUBCASE("K4 Hamiltonian cycle") {
    const auto x = make_x(4, 2, {{{0, 1}, 1}, {{1, 2}, 1}, {{2, 3}, 1}, {{0, 3}, 1}});
    const auto g = build_split_graph(oracle::uniform_instance(4, 2), x);
    double sum = 0;
    for (double v : g.x0()) sum += v;
    CHECK(sum == doctest::Approx(4.0));
    CHECK(degree0(g, g.u0()) == doctest::Approx(1.0));
    CHECK(degree0(g, g.v0()) == doctest::Approx(1.0));
    CHECK(to_tree_point(g).total() == doctest::Approx(4.0));
  }
  SUBCASE("split vertex other than 0") {
    const auto inst = oracle::euclidean_instance(5, 4, 9);
    const auto lp = solve_lp(inst);
    const auto g = build_split_graph(inst, lp.solution, 3);
    CHECK(g.u0() == 3);
    CHECK(g.v0() == 5);
    CHECK(degree0(g, 3) == doctest::Approx(2.0));
    CHECK(degree0(g, 5) == doctest::Approx(2.0));
    CHECK(check_tree_polytope(to_tree_point(g)).empty());
    CHECK_THROWS_AS(build_split_graph(inst, lp.solution, 5), InputError);
  }
}

TEST_CASE("check_tree_polytope") {
  TreePolytopePoint tri{3, complete_edges(3), {1, 1, 1}};
  const auto v = check_tree_polytope(tri);
  REQUIRE_FALSE(v.empty());
  bool whole = false;
  for (const auto& x : v)
    if (x.subset.size() == 3) {
      whole = true;
      CHECK(x.lhs == doctest::Approx(3.0));
      CHECK(x.rhs == doctest::Approx(2.0));
    }
  CHECK(whole);

  // characteristic vector of the star at 0 in K5
  const auto edges = complete_edges(5);
  std::vector<double> star(edges.size(), 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].touches(0)) star[i] = 1.0;
  CHECK(check_tree_polytope({5, edges, star}).empty());

  // mass concentrated inside a subset breaks a subset constraint only
  std::vector<double> bad(edges.size(), 0.0);
  bad[complete_edge_index(5, {0, 1})] = 1.5;
  bad[complete_edge_index(5, {2, 3})] = 1.0;
  bad[complete_edge_index(5, {3, 4})] = 1.0;
  bad[complete_edge_index(5, {1, 2})] = 0.5;
  CHECK_FALSE(check_tree_polytope({5, edges, bad}).empty());

  CHECK_THROWS_WITH_AS(check_tree_polytope({15, complete_edges(15), std::vector<double>(105, 0.0)}),
                       "enumeration infeasible", InputError);
}

TEST_CASE("LP optima lie in the spanning tree polytope") {
  int checked = 0;
  for (int n = 3; n <= 8; ++n)
    for (int k : {2, 3, 5, 8}) {
      const auto inst = oracle::euclidean_instance(n, k, static_cast<std::uint64_t>(7 * n + k));
      const auto g = build_split_graph(inst, solve_lp(inst).solution);
      CHECK(degree0(g, g.u0()) == doctest::Approx(k / 2.0));
      CHECK(degree0(g, g.v0()) == doctest::Approx(k / 2.0));
      const auto z = to_tree_point(g);
      CHECK(z.total() == doctest::Approx(n));
      CHECK(check_tree_polytope(z).empty());
      ++checked;
    }
  CHECK(checked == 24);
}

TEST_CASE("identify_back") {
  const auto inst = oracle::uniform_instance(3, 2);
  const auto g = build_split_graph(inst, make_x(3, 2, {{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}}));
  MultiEdgeSet m0;
  m0.add({0, 1});
  m0.add({3, 1});
  const auto m = identify_back(g, m0);
  CHECK(m.multiplicity({0, 1}) == 2);
  CHECK(m.size() == 2);
  CHECK(identify_back(g, MultiEdgeSet{}).empty());
}

TEST_CASE("identify_back preserves cost and same-side cuts") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> mult(0, 3);
  for (int n = 3; n <= 7; ++n) {
    const auto inst = oracle::euclidean_instance(n, 4, static_cast<std::uint64_t>(n));
    const auto g = build_split_graph(inst, solve_lp(inst).solution);
    for (int rep = 0; rep < 10; ++rep) {
      MultiEdgeSet m0;
      for (const Edge& e : g.edges()) m0.add(e, mult(rng));
      const auto m = identify_back(g, m0);
      CHECK(m.size() == m0.size());
      CHECK(m.cost([&](Edge e) { return inst.cost(e); }) == doctest::Approx(g.cost(m0)));
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) - 1; ++mask) {
        const auto s = CutSpec::from_mask(n, mask);
        std::vector<int> members0 = s.members();
        if (s.contains(g.u0())) members0.push_back(g.v0());
        CHECK(cut_size(m0, CutSpec(g.n0(), members0)) == cut_size(m, s));
      }
    }
  }
}

TEST_CASE("identify_back of a spanning tree of G0 is a 1-tree") {
  const int n = 5;
  const auto inst = oracle::euclidean_instance(n, 2, 4);
  const auto g = build_split_graph(inst, solve_lp(inst).solution);
  const auto trees = oracle::spanning_trees(g.n0(), g.edges());
  REQUIRE(trees.size() > 100);
  for (std::size_t t = 0; t < trees.size(); t += 37) {
    MultiEdgeSet m0;
    for (std::size_t id : trees[t]) m0.add(g.edges()[id]);
    const auto m = identify_back(g, m0);
    CHECK(m.size() == n);
    std::vector<Edge> flat;
    for (const auto& [e, c] : m.entries())
      for (long i = 0; i < c; ++i) flat.push_back(e);
    std::vector<std::size_t> all(flat.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CHECK(oracle::connects(n, flat, all));
  }
}
