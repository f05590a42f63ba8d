#pragma once

// Instance I/O, the end-to-end pipeline, baselines, batch experiments and
// CSV / JSON reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kecsm/graph.hpp"
#include "kecsm/lp.hpp"
#include "kecsm/rounding.hpp"
#include "kecsm/tree_dist.hpp"

namespace kecsm {

enum class InstanceFormat { kMatrixJson, kTsplibEuc2d };

InstanceFormat parse_format(const std::string& name);

struct LoadOptions {
  std::optional<int> k;  // overrides the file's k; required for TSPLIB
  bool closure = false;  // apply metric_closure instead of rejecting non-metric input
};

/// matrix-json: {"n": int, "k": int, "costs": n x n array}. Entries may be
/// null for absent edges when closure is requested.
MetricInstance parse_matrix_json(const std::string& text, const LoadOptions& opts = {});

/// TSPLIB EUC_2D: NODE_COORD_SECTION lines "id x y"; cost is the Euclidean
/// distance rounded to the nearest integer.
MetricInstance parse_tsplib_euc2d(const std::string& text, const LoadOptions& opts = {});

MetricInstance load_instance(const std::string& path, InstanceFormat format, const LoadOptions& opts = {});

std::string to_matrix_json(const MetricInstance& inst);

struct ReportRecord {
  std::string instance_id;
  int n = 0;
  int k = 0;
  double alpha = 0.0;
  int t = 0;
  long b = 0;
  std::uint64_t seed = 0;
  double lp_cost = 0.0;
  double cost_tstar = 0.0;
  double cost_b = 0.0;
  double cost_f = 0.0;
  double total = 0.0;
  double ratio_lp = 0.0;
  std::optional<double> ratio_opt;
  bool connected = false;
  long augments = 0;
  long eligible = 0;  // not emitted; feeds the augmentation-frequency statistics
  double ms = 0.0;
};

struct PipelineOptions {
  std::optional<double> alpha;  // nullopt selects the default
  std::uint64_t seed = 1;
  int split_vertex = 0;
  FitOptions fit;
  bool with_opt = false;  // attach ratio_opt when brute force is feasible
  unsigned threads = 1;
};

struct PipelineResult {
  ReportRecord record;
  FractionalSolution lp;
  LambdaWeights weights;
  RoundingOutput rounding;
};

/// LP -> split -> tree point -> max-entropy fit -> rounding -> identify
/// back -> connectivity certificate.
PipelineResult run_pipeline(const MetricInstance& inst, const PipelineOptions& opts,
                            const std::string& instance_id = "input");

/// Same as run_pipeline but reuses an LP solution (and fit) across seeds.
PipelineResult run_pipeline_from_lp(const MetricInstance& inst, const FractionalSolution& lp,
                                    const LambdaWeights* weights, const PipelineOptions& opts,
                                    const std::string& instance_id);

enum class Baseline { kKargerIndependent, kNaiveMstDouble };

Baseline parse_baseline(const std::string& name);

ReportRecord run_baseline(const MetricInstance& inst, Baseline which, const PipelineOptions& opts,
                          const std::string& instance_id = "input");

enum class Family { kEuclidean, kMatrix };

Family parse_family(const std::string& name);

/// Random instance: uniform points in the unit square with Euclidean costs,
/// or uniform [1, 100) matrix entries closed under shortest paths.
MetricInstance generate_instance(Family family, int n, int k, std::uint64_t seed);

struct BatchSpec {
  Family family = Family::kEuclidean;
  int instances = 10;
  int n = 10;
  std::vector<int> ks;
  int trials = 10;
  std::uint64_t seed_base = 1;
  std::optional<double> alpha;
  bool with_opt = false;
  unsigned threads = 1;
};

struct KSummary {
  int k = 0;
  std::size_t runs = 0;
  double mean_ratio_lp = 0.0;
  double max_ratio_lp = 0.0;
  double se_ratio_lp = 0.0;
  std::optional<double> mean_ratio_opt;
  std::size_t failures = 0;
  long augments = 0;
  long eligible = 0;
  double precise_bound = 0.0;
  double headline_bound = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRecord> records;  // sorted by (instance, k, trial)
  std::vector<KSummary> summary;      // ascending k
};

ExperimentReport run_batch(const BatchSpec& spec);

std::vector<KSummary> summarize(const std::vector<ReportRecord>& records);

/// Report CSV header, exactly:
/// instance_id,n,k,alpha,t,b,seed,lp_cost,cost_tstar,cost_b,cost_f,total,ratio_lp,ratio_opt,connected,augments,ms
std::string csv_header();
std::string csv_row(const ReportRecord& r);

/// Appends rows to a CSV file, writing the header when the file is new.
void append_csv(const std::string& path, const std::vector<ReportRecord>& records);

std::string summary_json(const std::vector<KSummary>& summary);

}  // namespace kecsm
