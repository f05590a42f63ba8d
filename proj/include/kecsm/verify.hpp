#pragma once

// Certification and ground truth: k-edge-connectivity certificates, exact
// optimum by branch and bound on tiny instances, tail bounds and the
// approximation-factor formulas.

#include <cstddef>
#include <span>
#include <vector>

#include "kecsm/graph.hpp"

namespace kecsm {

struct ConnectivityCertificate {
  long min_cut_value = 0;
  CutSpec witness;
  bool passes = false;
};

/// Global min cut of the multigraph with multiplicities as weights.
ConnectivityCertificate verify_k_connectivity(const MultiEdgeSet& m, int n, int k);

/// Minimum cut over all 2^(n-1) - 1 cuts by enumeration (n <= 20).
long exhaustive_min_cut(const MultiEdgeSet& m, int n);

struct OptResult {
  double cost = 0.0;
  MultiEdgeSet solution;
};

/// Exact k-ECSM optimum. Multiplicity per edge is capped at `cap`
/// (default k). Requires n <= 5 and k <= 6.
OptResult brute_force_opt(const MetricInstance& inst, int cap = -1);

/// exp(-eps^2 q' / 2), the lower-tail bound P[X < (1 - eps) q'] for a
/// Bernoulli sum with mean at least q'.
double chernoff_tail(double q_prime, double epsilon);

struct ApproxFactor {
  double headline = 0.0;  // 1 + sqrt(8 ln k / k)
  double precise = 0.0;   // 1 + alpha/sqrt(k/2) + exp(-alpha^2/2), alpha = sqrt(ln(k/2))
};

ApproxFactor approx_factor(int k);

/// Precise factor for an arbitrary alpha.
double precise_factor(int k, double alpha);

struct BernoulliSumStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;

  /// Standard error of (variance - mean), from the sample's fourth moments.
  double gap_std_error = 0.0;
};

BernoulliSumStats bs_stats(std::span<const long> samples);

}  // namespace kecsm
