#include "kecsm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kecsm {

std::vector<Edge> complete_edges(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return edges;
}

std::size_t complete_edge_index(int n, Edge e) {
  // rows 0..u-1 contribute (n-1) + (n-2) + ... + (n-u) edges
  const auto u = static_cast<std::size_t>(e.u);
  const auto nn = static_cast<std::size_t>(n);
  return u * nn - u * (u + 1) / 2 + static_cast<std::size_t>(e.v - e.u - 1);
}

MetricInstance::MetricInstance(int n, std::vector<double> costs, int k)
    : n_(n), costs_(std::move(costs)), k_(k) {
  if (n < 2) throw InputError("instance needs at least 2 vertices");
  if (k < 2) throw InputError("connectivity requirement k must be at least 2");
  if (costs_.size() != static_cast<std::size_t>(n) * n)
    throw InputError("cost matrix must be n x n");
}

std::string MetricViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kAsymmetric:
      os << "asymmetric cost between " << u << " and " << v;
      break;
    case Kind::kNonzeroDiagonal:
      os << "nonzero diagonal at " << u;
      break;
    case Kind::kNegative:
      os << "negative cost between " << u << " and " << v;
      break;
    case Kind::kTriangle:
      os << "triangle inequality violated: cost(" << u << "," << w << ") exceeds cost(" << u << ","
         << v << ") + cost(" << v << "," << w << ") by " << excess;
      break;
  }
  return os.str();
}

std::vector<MetricViolation> validate_metric(const MetricInstance& inst) {
  using Kind = MetricViolation::Kind;
  std::vector<MetricViolation> out;
  const int n = inst.n();
  for (int u = 0; u < n; ++u) {
    if (std::abs(inst.cost(u, u)) > kMetricTol) out.push_back({Kind::kNonzeroDiagonal, u, u, 0, inst.cost(u, u)});
    for (int v = u + 1; v < n; ++v) {
      const double d = inst.cost(u, v) - inst.cost(v, u);
      if (std::abs(d) > kMetricTol) out.push_back({Kind::kAsymmetric, u, v, 0, std::abs(d)});
      if (inst.cost(u, v) < -kMetricTol) out.push_back({Kind::kNegative, u, v, 0, -inst.cost(u, v)});
    }
  }
  // Each unordered pair {u,w} checked against every intermediate v.
  for (int u = 0; u < n; ++u)
    for (int w = u + 1; w < n; ++w)
      for (int v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        const double excess = inst.cost(u, w) - (inst.cost(u, v) + inst.cost(v, w));
        if (excess > kMetricTol) out.push_back({Kind::kTriangle, u, v, w, excess});
      }
  return out;
}

MetricInstance metric_closure(int n, std::span<const double> raw_costs, int k) {
  if (n < 2) throw InputError("instance needs at least 2 vertices");
  if (raw_costs.size() != static_cast<std::size_t>(n) * n) throw InputError("cost matrix must be n x n");
  std::vector<double> d(raw_costs.begin(), raw_costs.end());
  const auto at = [&](int i, int j) -> double& { return d[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (at(i, j) < 0 || std::isnan(at(i, j))) throw InputError("raw costs must be nonnegative");
      if (std::abs(at(i, j) - at(j, i)) > kMetricTol && std::isfinite(at(i, j) + at(j, i)))
        throw InputError("raw costs must be symmetric");
    }
    at(i, i) = 0.0;
  }
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, m) + at(m, j) < at(i, j)) at(i, j) = at(i, m) + at(m, j);
  for (double c : d)
    if (!std::isfinite(c)) throw InputError("instance not connected");
  return {n, std::move(d), k};
}

CutSpec::CutSpec(int n, std::vector<int> members) : inside_(static_cast<std::size_t>(n), 0) {
  for (int v : members) {
    if (v < 0 || v >= n) throw InputError("cut member out of range");
    inside_[static_cast<std::size_t>(v)] = 1;
  }
  const auto count = std::count(inside_.begin(), inside_.end(), 1);
  if (count == 0 || count == n) throw InputError("cut side must be a nonempty proper subset");
}

CutSpec CutSpec::from_mask(int n, std::uint64_t mask) {
  std::vector<int> members;
  for (int v = 0; v < n; ++v)
    if (mask >> v & 1U) members.push_back(v);
  return {n, std::move(members)};
}

std::vector<int> CutSpec::members() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

void MultiEdgeSet::add(Edge e, long copies) {
  if (copies < 0) throw InputError("multiplicity must be nonnegative");
  if (copies == 0) return;
  counts_[e] += copies;
  size_ += copies;
}

long MultiEdgeSet::multiplicity(Edge e) const {
  const auto it = counts_.find(e);
  return it == counts_.end() ? 0 : it->second;
}

MultiEdgeSet& MultiEdgeSet::operator+=(const MultiEdgeSet& other) {
  for (const auto& [e, m] : other.counts_) add(e, m);
  return *this;
}

long cut_size(const MultiEdgeSet& m, const CutSpec& s) {
  long total = 0;
  for (const auto& [e, c] : m.entries())
    if (s.crosses(e)) total += c;
  return total;
}

MinCut global_min_cut(int n, std::span<const WeightedEdge> edges) {
  if (n < 2) throw InputError("min cut needs at least 2 vertices");
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> w(nn * nn, 0.0);
  for (const auto& we : edges) {
    if (we.e.v >= n) throw InputError("edge endpoint out of range");
    w[static_cast<std::size_t>(we.e.u) * nn + we.e.v] += we.w;
    w[static_cast<std::size_t>(we.e.v) * nn + we.e.u] += we.w;
  }
  // groups[v] lists original vertices merged into super-vertex v
  std::vector<std::vector<int>> groups(nn);
  for (int v = 0; v < n; ++v) groups[static_cast<std::size_t>(v)] = {v};
  std::vector<int> alive(nn);
  for (int v = 0; v < n; ++v) alive[static_cast<std::size_t>(v)] = v;

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_side;
  std::vector<double> attach(nn);
  std::vector<char> added(nn);

  while (alive.size() > 1) {
    std::fill(attach.begin(), attach.end(), 0.0);
    std::fill(added.begin(), added.end(), 0);
    int prev = -1;
    int last = alive.front();
    for (std::size_t step = 0; step < alive.size(); ++step) {
      int pick = -1;
      for (int v : alive) {
        if (added[static_cast<std::size_t>(v)]) continue;
        if (pick < 0 || attach[static_cast<std::size_t>(v)] > attach[static_cast<std::size_t>(pick)]) pick = v;
      }
      if (pick < 0) break;
      added[static_cast<std::size_t>(pick)] = 1;
      prev = last;
      last = pick;
      for (int v : alive)
        if (!added[static_cast<std::size_t>(v)]) attach[static_cast<std::size_t>(v)] += w[static_cast<std::size_t>(pick) * nn + v];
    }
    // cut of the phase separates `last` from the rest
    const double phase = attach[static_cast<std::size_t>(last)];
    if (phase < best - kMetricTol) {
      best = phase;
      best_side = groups[static_cast<std::size_t>(last)];
    }
    auto& into = groups[static_cast<std::size_t>(prev)];
    const auto& from = groups[static_cast<std::size_t>(last)];
    into.insert(into.end(), from.begin(), from.end());
    for (int v : alive) {
      w[static_cast<std::size_t>(prev) * nn + v] += w[static_cast<std::size_t>(last) * nn + v];
      w[static_cast<std::size_t>(v) * nn + prev] = w[static_cast<std::size_t>(prev) * nn + v];
    }
    w[static_cast<std::size_t>(prev) * nn + prev] = 0.0;
    std::erase(alive, last);
  }
  // report the side holding vertex 0
  std::vector<char> in(nn, 0);
  for (int v : best_side) in[static_cast<std::size_t>(v)] = 1;
  const char want = in[0];
  std::vector<int> side;
  for (int v = 0; v < n; ++v)
    if (in[static_cast<std::size_t>(v)] == want) side.push_back(v);
  return {best, CutSpec(n, side)};
}

}  // namespace kecsm
