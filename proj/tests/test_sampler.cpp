#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "kecsm/lp.hpp"
#include "kecsm/sampler.hpp"
#include "kecsm/split.hpp"
#include "oracles.hpp"

using namespace kecsm;

namespace {

Multigraph triangle() { return {3, complete_edges(3)}; }

std::map<std::vector<std::size_t>, long> tally(const Multigraph& g, std::span<const double> lam, long n,
                                               std::uint64_t seed) {
  std::map<std::vector<std::size_t>, long> counts;
  auto rng = RngStream{seed, 0}.engine();
  for (long i = 0; i < n; ++i) ++counts[sample_tree(g, lam, rng).edge_ids];
  return counts;
}

void check_frequencies(const std::map<std::vector<std::size_t>, long>& counts, long n,
                       const std::map<std::vector<std::size_t>, double>& probs) {
  for (const auto& [tree, p] : probs) {
    const auto it = counts.find(tree);
    const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    CHECK(std::abs(freq - p) <= 3 * std::sqrt(p * (1 - p) / n));
  }
  for (const auto& [tree, c] : counts) CHECK(probs.count(tree) == 1);
}

}  // namespace

TEST_CASE("sample_tree on a path returns the unique tree") {
  const Multigraph path{3, {{0, 1}, {1, 2}}};
  const std::vector<double> lam{0.5, 3.0};
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t = sample_tree(path, lam, RngStream{s, 0});
    CHECK(t.edge_ids == std::vector<std::size_t>{0, 1});
    const auto e = sample_tree_enumeration(path, lam, RngStream{s, 0});
    CHECK(e.edge_ids == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("triangle tree frequencies") {
  const long n = 30000;
  SUBCASE("uniform") {
    const std::vector<double> lam{1, 1, 1};
    check_frequencies(tally(triangle(), lam, n, 3), n, {{{0, 1}, 1.0 / 3}, {{0, 2}, 1.0 / 3}, {{1, 2}, 1.0 / 3}});
  }
  SUBCASE("weighted") {
    // trees {01,02} weight 2, {01,12} weight 2, {02,12} weight 1
    const std::vector<double> lam{2, 1, 1};
    check_frequencies(tally(triangle(), lam, n, 4), n, {{{0, 1}, 0.4}, {{0, 2}, 0.4}, {{1, 2}, 0.2}});
  }
}

TEST_CASE("enumeration sampler") {
  const Multigraph k4{4, complete_edges(4)};
  CHECK(enumerate_spanning_trees(k4).size() == 16);
  CHECK(enumerate_spanning_trees(k4).size() == oracle::spanning_trees(4, k4.edges).size());
  const long n = 30000;
  std::map<std::vector<std::size_t>, long> counts;
  std::map<std::vector<std::size_t>, double> probs;
  for (const auto& t : oracle::spanning_trees(4, k4.edges)) probs[t] = 1.0 / 16;
  const std::vector<double> ones(6, 1.0);
  for (long i = 0; i < n; ++i) ++counts[sample_tree_enumeration(k4, ones, RngStream{9, static_cast<std::uint64_t>(i)}).edge_ids];
  check_frequencies(counts, n, probs);

  std::map<std::vector<std::size_t>, long> tri;
  const std::vector<double> lam{2, 1, 1};
  for (long i = 0; i < n; ++i) ++tri[sample_tree_enumeration(triangle(), lam, RngStream{10, static_cast<std::uint64_t>(i)}).edge_ids];
  check_frequencies(tri, n, {{{0, 1}, 0.4}, {{0, 2}, 0.4}, {{1, 2}, 0.2}});

  CHECK_THROWS_AS(enumerate_spanning_trees({9, complete_edges(9)}), InputError);
}

TEST_CASE("parallel edges are chosen in proportion to their weights") {
  // two vertices joined by three parallel edges
  const Multigraph g{2, {{0, 1}, {0, 1}, {0, 1}}};
  const std::vector<double> lam{1, 2, 5};
  const long n = 40000;
  std::vector<long> hits(3, 0);
  auto rng = RngStream{5, 1}.engine();
  for (long i = 0; i < n; ++i) ++hits[sample_tree(g, lam, rng).edge_ids.at(0)];
  for (std::size_t i = 0; i < 3; ++i) {
    const double p = lam[i] / 8.0;
    CHECK(std::abs(static_cast<double>(hits[i]) / n - p) <= 4 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("sampled trees are spanning trees") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  const Multigraph k7{7, complete_edges(7)};
  std::vector<double> lam(k7.edges.size());
  for (double& x : lam) x = u(rng);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto t = sample_tree(k7, lam, RngStream{s, s});
    CHECK(is_spanning_tree(k7, t));
    CHECK(oracle::connects(7, k7.edges, t.edge_ids));
  }
  CHECK_FALSE(is_spanning_tree(k7, SpanningTree{{0, 1, 2}}));
  CHECK_THROWS_AS(sample_tree({4, {{0, 1}, {2, 3}}}, std::vector<double>{1, 1}, RngStream{}), InputError);
}

TEST_CASE("sample_batch") {
  const auto inst = oracle::euclidean_instance(7, 6, 21);
  const auto g0 = build_split_graph(inst, solve_lp(inst).solution);
  const auto w = fit_max_entropy(g0.graph(), to_tree_point(g0).z);

  CHECK(sample_batch(w, 1, 7).size() == 1);
  const auto a = sample_batch(w, 40, 7);
  const auto b = sample_batch(w, 40, 7);
  const auto c = sample_batch(w, 40, 7, 4);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].edge_ids == b[i].edge_ids);
    CHECK(a[i].edge_ids == c[i].edge_ids);
    CHECK(a[i].edge_ids == sample_tree(w, RngStream{7, i}).edge_ids);
    CHECK(is_spanning_tree(w.graph, a[i]));
    for (std::size_t id : a[i].edge_ids) CHECK(w.level_of_edge[id] >= 0);
  }
  const auto d = sample_batch(w, 40, 8);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].edge_ids != d[i].edge_ids;
  CHECK(differs);
  CHECK_THROWS_AS(sample_batch(w, 0, 1), InputError);
}

TEST_CASE("leveled sampler matches fitted marginals") {
  const auto inst = oracle::euclidean_instance(5, 4, 2);
  const auto g0 = build_split_graph(inst, solve_lp(inst).solution);
  const auto w = fit_max_entropy(g0.graph(), to_tree_point(g0).z);
  const std::size_t n = 20000;
  const auto trees = sample_batch(w, n, 99, 4);
  std::vector<double> freq(w.graph.edges.size(), 0.0);
  for (const auto& t : trees)
    for (std::size_t id : t.edge_ids) freq[id] += 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double p = w.fitted_marginals[i];
    CHECK(std::abs(freq[i] - p) <= 4 * std::sqrt(p * (1 - p) / static_cast<double>(n)) + 1e-12);
  }
}
