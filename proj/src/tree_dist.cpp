#include "kecsm/tree_dist.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace kecsm {
namespace {

// Tightness tolerance on |S| - z(E(S)) >= 1.
constexpr double kTightTol = 1e-7;
constexpr double kSupportTol = 1e-12;

Eigen::MatrixXd grounded_laplacian(const Multigraph& g, std::span<const double> lam) {
  // vertex 0 grounded; vertex v > 0 maps to row v - 1
  const Eigen::Index m = g.n - 1;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const double w = lam[i];
    if (w <= 0) continue;
    const int a = g.edges[i].u - 1;
    const int b = g.edges[i].v - 1;
    if (a >= 0) lap(a, a) += w;
    if (b >= 0) lap(b, b) += w;
    if (a >= 0 && b >= 0) {
      lap(a, b) -= w;
      lap(b, a) -= w;
    }
  }
  return lap;
}

void check_weights(const Multigraph& g, std::span<const double> lam) {
  if (lam.size() != g.edges.size()) throw InputError("weight vector does not match edge count");
  if (g.n < 1) throw InputError("graph has no vertices");
  for (double w : lam)
    if (!(w >= 0) || !std::isfinite(w)) throw InputError("edge weights must be finite and nonnegative");
}

/// Inverse of the grounded Laplacian, kept current under single-edge weight
/// changes by Sherman-Morrison.
class GroundedInverse {
 public:
  GroundedInverse(const Multigraph& g, std::span<const double> lam) {
    const Eigen::MatrixXd lap = grounded_laplacian(g, lam);
    if (lap.rows() == 0) return;
    Eigen::LLT<Eigen::MatrixXd> llt(lap);
    if (llt.info() != Eigen::Success) throw InputError("graph is disconnected under positive weights");
    inv_ = llt.solve(Eigen::MatrixXd::Identity(lap.rows(), lap.cols()));
    if (!inv_.allFinite()) throw InputError("graph is disconnected under positive weights");
  }

  [[nodiscard]] double resistance(int a, int b) const {
    const double aa = a > 0 ? inv_(a - 1, a - 1) : 0.0;
    const double bb = b > 0 ? inv_(b - 1, b - 1) : 0.0;
    const double ab = a > 0 && b > 0 ? inv_(a - 1, b - 1) : 0.0;
    return aa + bb - 2.0 * ab;
  }

  /// Laplacian gains delta * (e_a - e_b)(e_a - e_b)^T.
  void update(int a, int b, double delta) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(inv_.rows());
    if (a > 0) col += inv_.col(a - 1);
    if (b > 0) col -= inv_.col(b - 1);
    const double denom = 1.0 + delta * resistance(a, b);
    inv_.noalias() -= (delta / denom) * col * col.transpose();
  }

  /// Laplacian multiplied by c.
  void scale(double c) { inv_ /= c; }

 private:
  Eigen::MatrixXd inv_;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

bool connected(const Multigraph& g) {
  UnionFind uf(g.n);
  for (const Edge& e : g.edges) uf.unite(e.u, e.v);
  for (int v = 0; v < g.n; ++v)
    if (uf.find(v) != 0) return false;
  return true;
}

/// Dense Edmonds-Karp max flow; returns the flow value and the source side
/// of the minimal minimum cut.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : n_(n), cap_(static_cast<std::size_t>(n) * n, 0.0) {}
  void add(int a, int b, double c) { cap_[idx(a, b)] += c; }

  double run(int s, int t, std::vector<char>& source_side) {
    double flow = 0.0;
    std::vector<int> prev(static_cast<std::size_t>(n_));
    while (true) {
      std::fill(prev.begin(), prev.end(), -1);
      prev[static_cast<std::size_t>(s)] = s;
      std::deque<int> queue{s};
      while (!queue.empty() && prev[static_cast<std::size_t>(t)] < 0) {
        const int a = queue.front();
        queue.pop_front();
        for (int b = 0; b < n_; ++b)
          if (prev[static_cast<std::size_t>(b)] < 0 && cap_[idx(a, b)] > kEps) {
            prev[static_cast<std::size_t>(b)] = a;
            queue.push_back(b);
          }
      }
      if (prev[static_cast<std::size_t>(t)] < 0) break;
      double push = std::numeric_limits<double>::infinity();
      for (int b = t; b != s; b = prev[static_cast<std::size_t>(b)])
        push = std::min(push, cap_[idx(prev[static_cast<std::size_t>(b)], b)]);
      for (int b = t; b != s; b = prev[static_cast<std::size_t>(b)]) {
        cap_[idx(prev[static_cast<std::size_t>(b)], b)] -= push;
        cap_[idx(b, prev[static_cast<std::size_t>(b)])] += push;
      }
      flow += push;
    }
    source_side.assign(static_cast<std::size_t>(n_), 0);
    for (int v = 0; v < n_; ++v) source_side[static_cast<std::size_t>(v)] = prev[static_cast<std::size_t>(v)] >= 0;
    return flow;
  }

 private:
  static constexpr double kEps = 1e-13;
  [[nodiscard]] std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }
  int n_;
  std::vector<double> cap_;
};

/// min over S containing a and b of |S| - z(E(S)), with the inclusion-minimal
/// minimizer. Uses |S| - z(E(S)) = sum_{v in S} (1 - d_v/2) + z(delta(S))/2.
std::pair<double, std::vector<int>> min_excess_set(const Multigraph& h, std::span<const double> z, int a, int b) {
  const int s = h.n;
  const int t = h.n + 1;
  MaxFlow flow(h.n + 2);
  std::vector<double> degree(static_cast<std::size_t>(h.n), 0.0);
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    const Edge e = h.edges[i];
    flow.add(e.u, e.v, z[i] / 2.0);
    flow.add(e.v, e.u, z[i] / 2.0);
    degree[static_cast<std::size_t>(e.u)] += z[i];
    degree[static_cast<std::size_t>(e.v)] += z[i];
  }
  double offset = 0.0;
  for (int v = 0; v < h.n; ++v) {
    const double w = 1.0 - degree[static_cast<std::size_t>(v)] / 2.0;
    if (w >= 0) {
      flow.add(v, t, w);
    } else {
      flow.add(s, v, -w);
      offset += w;
    }
  }
  const double big = 4.0 * (h.n + 1) + std::accumulate(degree.begin(), degree.end(), 0.0);
  flow.add(s, a, big);
  flow.add(s, b, big);
  std::vector<char> side;
  const double value = flow.run(s, t, side) + offset;
  std::vector<int> members;
  for (int v = 0; v < h.n; ++v)
    if (side[static_cast<std::size_t>(v)]) members.push_back(v);
  return {value, std::move(members)};
}

/// Cyclic exact coordinate descent on the max-entropy dual for a target in
/// the relative interior: lam_e is set so that p_e would equal target_e with
/// all other weights fixed, i.e. lam_e *= t(1-p) / (p(1-t)).
std::vector<double> fit_interior(const Multigraph& g, const std::vector<double>& target, double eps,
                                 std::size_t& updates, std::size_t max_updates) {
  const std::size_t m = g.edges.size();
  std::vector<double> lam(m, 1.0);
  if (m == 1 || g.n == 2) {
    // parallel edges between two vertices: p is proportional to lam
    for (std::size_t i = 0; i < m; ++i) lam[i] = target[i];
    return lam;
  }
  while (true) {
    GroundedInverse inv(g, lam);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double p = lam[i] * inv.resistance(g.edges[i].u, g.edges[i].v);
      worst = std::max(worst, p / target[i]);
    }
    if (worst <= 1.0 + eps) return lam;
    for (std::size_t i = 0; i < m; ++i) {
      const Edge e = g.edges[i];
      const double p = lam[i] * inv.resistance(e.u, e.v);
      const double t = target[i];
      if (p >= 1.0 - 1e-14 || t >= 1.0 - 1e-14) continue;
      const double factor = t * (1.0 - p) / (p * (1.0 - t));
      if (std::abs(factor - 1.0) < 1e-15) continue;
      if (++updates > max_updates) {
        std::ostringstream os;
        os << "max-entropy fit did not converge: max marginal ratio " << worst;
        throw ConvergenceError(os.str());
      }
      const double delta = lam[i] * (factor - 1.0);
      lam[i] *= factor;
      inv.update(e.u, e.v, delta);
    }
    double log_mean = 0.0;
    for (double w : lam) log_mean += std::log(w);
    const double c = std::exp(-log_mean / static_cast<double>(m));
    for (double& w : lam) w *= c;
  }
}

}  // namespace

MarginalVector tree_marginals(const Multigraph& g, std::span<const double> lam) {
  check_weights(g, lam);
  MarginalVector out;
  out.p.assign(g.edges.size(), 0.0);
  if (g.n == 1) return out;
  const GroundedInverse inv(g, lam);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    out.p[i] = lam[i] * inv.resistance(g.edges[i].u, g.edges[i].v);
  return out;
}

double effective_resistance(const Multigraph& g, std::span<const double> lam, std::size_t edge) {
  check_weights(g, lam);
  if (edge >= g.edges.size()) throw InputError("edge index out of range");
  const GroundedInverse inv(g, lam);
  return inv.resistance(g.edges[edge].u, g.edges[edge].v);
}

double spanning_tree_count(const Multigraph& g, std::span<const double> lam) {
  check_weights(g, lam);
  if (g.n <= 1) return 1.0;
  const Eigen::MatrixXd lap = grounded_laplacian(g, lam);
  return std::max(0.0, lap.fullPivLu().determinant());
}

LambdaWeights fit_max_entropy(const Multigraph& g, std::span<const double> z, const FitOptions& opts) {
  const std::size_t m = g.edges.size();
  if (z.size() != m) throw InputError("target vector does not match edge count");
  if (g.n < 2) throw InputError("graph needs at least 2 vertices");
  if (!(opts.epsilon_marginal > 0)) throw InputError("epsilon_marginal must be positive");
  for (double v : z)
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-6) throw InputError("point outside spanning tree polytope");

  LambdaWeights out;
  out.graph = g;
  out.lam.assign(m, 0.0);
  out.level_of_edge.assign(m, -1);
  out.fitted_marginals.assign(m, 0.0);
  out.epsilon_marginal = opts.epsilon_marginal;

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m; ++i)
    if (z[i] > kSupportTol) active.push_back(i);

  UnionFind classes(g.n);
  while (true) {
    // Contracted graph H over the current vertex classes.
    std::vector<int> local(static_cast<std::size_t>(g.n), -1);
    std::vector<int> reps;
    for (int v = 0; v < g.n; ++v) {
      const int r = classes.find(v);
      if (local[static_cast<std::size_t>(r)] < 0) {
        local[static_cast<std::size_t>(r)] = static_cast<int>(reps.size());
        reps.push_back(r);
      }
      local[static_cast<std::size_t>(v)] = local[static_cast<std::size_t>(r)];
    }
    const int nh = static_cast<int>(reps.size());
    if (nh == 1) break;
    Multigraph h{nh, {}};
    std::vector<double> zh;
    for (std::size_t i : active) {
      h.edges.emplace_back(local[static_cast<std::size_t>(g.edges[i].u)], local[static_cast<std::size_t>(g.edges[i].v)]);
      zh.push_back(z[i]);
    }
    if (!connected(h)) throw InputError("point outside spanning tree polytope: support is disconnected");

    // Smallest proper tight set, if any. The inclusion-minimal tight set
    // containing an edge's endpoints is unique, and every minimal tight set
    // arises this way.
    std::vector<int> chosen;
    std::vector<char> seen(static_cast<std::size_t>(nh) * nh, 0);
    for (const Edge& e : h.edges) {
      char& flag = seen[static_cast<std::size_t>(e.u) * nh + e.v];
      if (flag) continue;
      flag = 1;
      auto [excess, set] = min_excess_set(h, zh, e.u, e.v);
      if (excess < 1.0 - kTightTol) {
        std::ostringstream os;
        os << "point outside spanning tree polytope: z(E(S)) exceeds |S|-1 by " << 1.0 - excess;
        throw InputError(os.str());
      }
      if (excess <= 1.0 + kTightTol && static_cast<int>(set.size()) < nh &&
          (chosen.empty() || set.size() < chosen.size()))
        chosen = std::move(set);
    }
    const bool whole = chosen.empty();
    if (whole) {
      chosen.resize(static_cast<std::size_t>(nh));
      std::iota(chosen.begin(), chosen.end(), 0);
    }

    std::vector<int> position(static_cast<std::size_t>(nh), -1);
    for (std::size_t j = 0; j < chosen.size(); ++j) position[static_cast<std::size_t>(chosen[j])] = static_cast<int>(j);
    FitLevel level;
    level.graph.n = static_cast<int>(chosen.size());
    std::vector<double> target;
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < active.size(); ++j) {
      const int a = position[static_cast<std::size_t>(h.edges[j].u)];
      const int b = position[static_cast<std::size_t>(h.edges[j].v)];
      if (a >= 0 && b >= 0) {
        level.graph.edges.emplace_back(a, b);
        level.edge_ids.push_back(active[j]);
        target.push_back(zh[j]);
      } else {
        rest.push_back(active[j]);
      }
    }
    const double mass = std::accumulate(target.begin(), target.end(), 0.0);
    const double want = level.graph.n - 1;
    if (std::abs(mass - want) > kTightTol * std::max(1.0, want)) {
      std::ostringstream os;
      os << "point outside spanning tree polytope: total mass " << mass << " differs from " << want;
      throw InputError(os.str());
    }
    if (!connected(level.graph)) throw InputError("point outside spanning tree polytope: tight set is disconnected");
    for (double& t : target) t *= want / mass;

    level.lam = fit_interior(level.graph, target, opts.epsilon_marginal / 2.0, out.updates, opts.max_iters);
    const MarginalVector p = tree_marginals(level.graph, level.lam);
    const int level_id = static_cast<int>(out.levels.size());
    for (std::size_t j = 0; j < level.edge_ids.size(); ++j) {
      const std::size_t id = level.edge_ids[j];
      out.lam[id] = level.lam[j];
      out.level_of_edge[id] = level_id;
      out.fitted_marginals[id] = p.p[j];
    }
    out.levels.push_back(std::move(level));
    active = std::move(rest);
    for (std::size_t j = 1; j < chosen.size(); ++j)
      classes.unite(reps[static_cast<std::size_t>(chosen[0])], reps[static_cast<std::size_t>(chosen[j])]);
    if (whole) break;
  }

  for (std::size_t i = 0; i < m; ++i)
    if (out.level_of_edge[i] >= 0) out.max_ratio = std::max(out.max_ratio, out.fitted_marginals[i] / z[i]);
  if (out.max_ratio > 1.0 + opts.epsilon_marginal) {
    std::ostringstream os;
    os << "max-entropy fit missed tolerance: max marginal ratio " << out.max_ratio;
    throw ConvergenceError(os.str());
  }
  return out;
}

}  // namespace kecsm
