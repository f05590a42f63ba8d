#include "kecsm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kecsm/rounding.hpp"

namespace kecsm {
namespace {

class BranchAndBound {
 public:
  BranchAndBound(const MetricInstance& inst, int cap)
      : inst_(inst), n_(inst.n()), k_(inst.k()), cap_(cap), edges_(complete_edges(inst.n())) {
    const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
    for (std::uint64_t mask = 1; mask < full; mask += 2) cuts_.push_back(mask);
    const std::size_t m = edges_.size();
    // crossing[i] lists the cuts edge i crosses; remaining[c][i] counts cut
    // c's edges at positions >= i.
    crossing_.resize(m);
    remaining_.assign(cuts_.size(), std::vector<int>(m + 1, 0));
    for (std::size_t c = 0; c < cuts_.size(); ++c) {
      for (std::size_t i = m; i-- > 0;) {
        const bool x = (cuts_[c] >> edges_[i].u & 1U) != (cuts_[c] >> edges_[i].v & 1U);
        if (x) crossing_[i].push_back(c);
        remaining_[c][i] = remaining_[c][i + 1] + (x ? 1 : 0);
      }
    }
    min_incident_.assign(m + 1, std::vector<double>(static_cast<std::size_t>(n_), kInf));
    for (std::size_t i = m; i-- > 0;) {
      min_incident_[i] = min_incident_[i + 1];
      for (int v : {edges_[i].u, edges_[i].v})
        min_incident_[i][static_cast<std::size_t>(v)] = std::min(min_incident_[i][static_cast<std::size_t>(v)], inst.cost(edges_[i]));
    }
    cut_load_.assign(cuts_.size(), 0);
    degree_.assign(static_cast<std::size_t>(n_), 0);
    mult_.assign(m, 0);
  }

  OptResult solve(double upper_bound, MultiEdgeSet incumbent) {
    best_ = upper_bound;
    best_solution_ = std::move(incumbent);
    dfs(0, 0.0);
    return {best_, best_solution_};
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double lower_bound(std::size_t pos, double cost) const {
    double extra = 0.0;
    for (int v = 0; v < n_; ++v) {
      const long deficit = k_ - degree_[static_cast<std::size_t>(v)];
      if (deficit <= 0) continue;
      const double c = min_incident_[pos][static_cast<std::size_t>(v)];
      if (c == kInf) return kInf;
      extra += static_cast<double>(deficit) * c / 2.0;
    }
    return cost + extra;
  }

  bool cuts_reachable(std::size_t pos) const {
    for (std::size_t c = 0; c < cuts_.size(); ++c)
      if (cut_load_[c] + static_cast<long>(cap_) * remaining_[c][pos] < k_) return false;
    return true;
  }

  void dfs(std::size_t pos, double cost) {
    if (lower_bound(pos, cost) >= best_ - 1e-9) return;
    if (!cuts_reachable(pos)) return;
    if (pos == edges_.size()) {
      best_ = cost;
      best_solution_ = MultiEdgeSet{};
      for (std::size_t i = 0; i < edges_.size(); ++i) best_solution_.add(edges_[i], mult_[i]);
      return;
    }
    const Edge e = edges_[pos];
    const double c = inst_.cost(e);
    for (int m = 0; m <= cap_; ++m) {
      mult_[pos] = m;
      dfs(pos + 1, cost + m * c);
      // raise the multiplicity by one for the next iteration
      for (std::size_t cut : crossing_[pos]) ++cut_load_[cut];
      ++degree_[static_cast<std::size_t>(e.u)];
      ++degree_[static_cast<std::size_t>(e.v)];
    }
    for (std::size_t cut : crossing_[pos]) cut_load_[cut] -= cap_ + 1;
    degree_[static_cast<std::size_t>(e.u)] -= cap_ + 1;
    degree_[static_cast<std::size_t>(e.v)] -= cap_ + 1;
    mult_[pos] = 0;
  }

  const MetricInstance& inst_;
  int n_;
  int k_;
  int cap_;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> cuts_;
  std::vector<std::vector<std::size_t>> crossing_;
  std::vector<std::vector<int>> remaining_;
  std::vector<std::vector<double>> min_incident_;
  std::vector<long> cut_load_;
  std::vector<long> degree_;
  std::vector<int> mult_;
  double best_ = kInf;
  MultiEdgeSet best_solution_;
};

}  // namespace

ConnectivityCertificate verify_k_connectivity(const MultiEdgeSet& m, int n, int k) {
  std::vector<WeightedEdge> weighted;
  for (const auto& [e, c] : m.entries()) {
    if (e.v >= n) throw InputError("multiset edge out of range");
    weighted.push_back({e, static_cast<double>(c)});
  }
  MinCut cut = global_min_cut(n, weighted);
  const auto value = static_cast<long>(std::llround(cut.value));
  return {value, std::move(cut.side), value >= k};
}

long exhaustive_min_cut(const MultiEdgeSet& m, int n) {
  if (n < 2 || n > 20) throw InputError("exhaustive min cut needs 2 <= n <= 20");
  long best = std::numeric_limits<long>::max();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; mask += 2) best = std::min(best, cut_size(m, CutSpec::from_mask(n, mask)));
  return best;
}

OptResult brute_force_opt(const MetricInstance& inst, int cap) {
  if (inst.n() > 5 || inst.k() > 6) throw InputError("brute force limited to n <= 5 and k <= 6");
  if (cap < 0) cap = inst.k();
  if (cap < 1) throw InputError("multiplicity cap must be positive");
  // Incumbent: ceil(k/2) doubled MSTs.
  const Multigraph g{inst.n(), complete_edges(inst.n())};
  std::vector<double> cost;
  for (const Edge& e : g.edges) cost.push_back(inst.cost(e));
  MultiEdgeSet incumbent;
  for (std::size_t id : mst(g, cost)) incumbent.add(g.edges[id], 2L * ((inst.k() + 1) / 2));
  const double ub = incumbent.cost([&](Edge e) { return inst.cost(e); });
  BranchAndBound search(inst, cap);
  return search.solve(ub, std::move(incumbent));
}

double chernoff_tail(double q_prime, double epsilon) {
  if (!(q_prime > 0) || !std::isfinite(q_prime)) throw InputError("q' must be positive");
  if (!(epsilon > 0 && epsilon <= 1)) throw InputError("epsilon must lie in (0,1]");
  return std::exp(-epsilon * epsilon * q_prime / 2.0);
}

double precise_factor(int k, double alpha) {
  if (k < 2) throw InputError("k must be at least 2");
  return 1.0 + alpha / std::sqrt(k / 2.0) + std::exp(-alpha * alpha / 2.0);
}

ApproxFactor approx_factor(int k) {
  if (k < 2) throw InputError("k must be at least 2");
  const double kd = k;
  return {1.0 + std::sqrt(8.0 * std::log(kd) / kd), precise_factor(k, std::sqrt(std::log(kd / 2.0)))};
}

BernoulliSumStats bs_stats(std::span<const long> samples) {
  if (samples.size() < 2) throw InputError("need at least two samples");
  BernoulliSumStats s;
  s.count = samples.size();
  const auto n = static_cast<double>(s.count);
  for (long x : samples) s.mean += static_cast<double>(x);
  s.mean /= n;
  double m2 = 0.0;
  for (long x : samples) m2 += (x - s.mean) * (x - s.mean);
  s.variance = m2 / (n - 1.0);
  // per-sample contribution to (variance - mean)
  double g_mean = 0.0;
  double g_sq = 0.0;
  for (long x : samples) {
    const double g = (x - s.mean) * (x - s.mean) - static_cast<double>(x);
    g_mean += g;
    g_sq += g * g;
  }
  g_mean /= n;
  s.gap_std_error = std::sqrt(std::max(0.0, g_sq / n - g_mean * g_mean) / n);
  return s;
}

}  // namespace kecsm
