#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kecsm/graph.hpp"
#include "oracles.hpp"

using namespace kecsm;

namespace {

MetricInstance triangle(double c01, double c02, double c12, int k = 2) {
  return {3, {0, c01, c02, c01, 0, c12, c02, c12, 0}, k};
}

MultiEdgeSet random_multiset(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> mult(0, 3);
  MultiEdgeSet m;
  for (const Edge& e : complete_edges(n)) {
    const long c = mult(rng);
    if (c > 0) m.add(e, c);
  }
  return m;
}

}  // namespace

TEST_CASE("edge canonicalization") {
  const Edge e(3, 1);
  CHECK(e.u == 1);
  CHECK(e.v == 3);
  CHECK(e.other(1) == 3);
  CHECK_THROWS_AS(Edge(2, 2), InputError);
  CHECK(complete_edges(4).size() == 6);
  const auto edges = complete_edges(5);
  for (std::size_t i = 0; i < edges.size(); ++i) CHECK(complete_edge_index(5, edges[i]) == i);
}

TEST_CASE("validate_metric") {
  CHECK(validate_metric(triangle(1, 1, 1)).empty());
  const auto v = validate_metric(triangle(1, 5, 1));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == MetricViolation::Kind::kTriangle);
  CHECK(v[0].excess == doctest::Approx(3.0));
  CHECK(validate_metric(MetricInstance(2, {0, 7, 7, 0}, 2)).empty());

  CHECK_FALSE(validate_metric(MetricInstance(2, {0, 7, 6, 0}, 2)).empty());
  CHECK_FALSE(validate_metric(MetricInstance(2, {1, 7, 7, 0}, 2)).empty());
  CHECK_FALSE(validate_metric(MetricInstance(2, {0, -1, -1, 0}, 2)).empty());
}

TEST_CASE("metric_closure") {
  const double inf = std::numeric_limits<double>::infinity();
  SUBCASE("path") {
    const std::vector<double> raw{0, 1, inf, 1, 0, 1, inf, 1, 0};
    CHECK(metric_closure(3, raw, 2).cost(0, 2) == 2.0);
  }
  SUBCASE("idempotent on metrics") {
    const auto inst = oracle::euclidean_instance(6, 2, 11);
    const auto closed = metric_closure(6, inst.costs(), 2);
    for (std::size_t i = 0; i < inst.costs().size(); ++i)
      CHECK(closed.costs()[i] == doctest::Approx(inst.costs()[i]).epsilon(1e-12));
  }
  SUBCASE("4-cycle chords") {
    std::vector<double> raw(16, inf);
    for (int v = 0; v < 4; ++v) {
      raw[static_cast<std::size_t>(v * 4 + v)] = 0;
      raw[static_cast<std::size_t>(v * 4 + (v + 1) % 4)] = 1;
      raw[static_cast<std::size_t>(((v + 1) % 4) * 4 + v)] = 1;
    }
    const auto closed = metric_closure(4, raw, 2);
    CHECK(closed.cost(0, 2) == 2.0);
    CHECK(closed.cost(1, 3) == 2.0);
  }
  SUBCASE("disconnected") {
    const std::vector<double> raw{0, 1, inf, 1, 0, inf, inf, inf, 0};
    CHECK_THROWS_WITH_AS(metric_closure(3, raw, 2), "instance not connected", InputError);
  }
  SUBCASE("random inputs close to metrics") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1.0, 100.0);
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 3 + rep % 6;
      std::vector<double> raw(static_cast<std::size_t>(n * n), 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          raw[static_cast<std::size_t>(i * n + j)] = raw[static_cast<std::size_t>(j * n + i)] = u(rng);
      CHECK(validate_metric(metric_closure(n, raw, 2)).empty());
    }
  }
}

TEST_CASE("cut_size") {
  MultiEdgeSet tri;
  tri.add({0, 1});
  tri.add({0, 2});
  tri.add({1, 2});
  CHECK(cut_size(tri, CutSpec(3, {0})) == 2);
  CHECK(cut_size(MultiEdgeSet{}, CutSpec(3, {1})) == 0);
  MultiEdgeSet m;
  m.add({0, 1}, 2);
  m.add({0, 2}, 2);
  m.add({1, 2}, 1);
  CHECK(cut_size(m, CutSpec(3, {0})) == 4);
  CHECK(m.size() == 5);
}

TEST_CASE("cut_size is additive over multiset union") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + rep % 5;
    const auto a = random_multiset(n, rng);
    const auto b = random_multiset(n, rng);
    const auto ab = a + b;
    CHECK(ab.size() == a.size() + b.size());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) - 1; ++mask) {
      const auto s = CutSpec::from_mask(n, mask);
      CHECK(cut_size(ab, s) == cut_size(a, s) + cut_size(b, s));
    }
  }
}

TEST_CASE("CutSpec rejects trivial sides") {
  CHECK_THROWS_AS(CutSpec(3, {}), InputError);
  CHECK_THROWS_AS(CutSpec(3, {0, 1, 2}), InputError);
}

TEST_CASE("global_min_cut examples") {
  std::vector<WeightedEdge> tri{{{0, 1}, 1}, {{0, 2}, 1}, {{1, 2}, 1}};
  CHECK(global_min_cut(3, tri).value == doctest::Approx(2.0));

  std::vector<WeightedEdge> two{{{0, 1}, 7}};
  const auto mc = global_min_cut(2, two);
  CHECK(mc.value == doctest::Approx(7.0));
  CHECK(mc.side.members() == std::vector<int>{0});

  std::vector<WeightedEdge> k4;
  for (const Edge& e : complete_edges(4)) k4.push_back({e, 1.0});
  CHECK(global_min_cut(4, k4).value == doctest::Approx(3.0));

  std::vector<WeightedEdge> split{{{0, 1}, 2.0}, {{2, 3}, 4.0}};
  CHECK(global_min_cut(4, split).value == doctest::Approx(0.0));
}

TEST_CASE("global_min_cut matches exhaustive enumeration") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::bernoulli_distribution keep(0.6);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 9;
    std::vector<Edge> edges;
    std::vector<double> w;
    std::vector<WeightedEdge> we;
    for (const Edge& e : complete_edges(n)) {
      if (!keep(rng)) continue;
      edges.push_back(e);
      w.push_back(u(rng));
      we.push_back({edges.back(), w.back()});
    }
    const auto mc = global_min_cut(n, we);
    const double want = oracle::min_cut(n, edges, w);
    CHECK(mc.value == doctest::Approx(want).epsilon(1e-9));
    double witness = 0;
    for (const auto& x : we)
      if (mc.side.crosses(x.e)) witness += x.w;
    CHECK(witness == doctest::Approx(mc.value).epsilon(1e-9));
  }
}
