#include "kecsm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kecsm/sampler.hpp"
#include "kecsm/split.hpp"
#include "kecsm/verify.hpp"

namespace kecsm {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

MetricInstance finish_instance(int n, std::vector<double> costs, int k, bool closure) {
  if (closure) return metric_closure(n, costs, k);
  for (double c : costs)
    if (!std::isfinite(c)) throw InputError("absent edges require --closure");
  MetricInstance inst(n, std::move(costs), k);
  const auto violations = validate_metric(inst);
  if (!violations.empty()) throw InputError("instance is not metric: " + violations.front().describe());
  return inst;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t trial_seed(std::uint64_t base, int instance, int k, int trial) {
  return (base + static_cast<std::uint64_t>(instance)) * 1000003ULL + static_cast<std::uint64_t>(k) * 1009ULL +
         static_cast<std::uint64_t>(trial);
}

}  // namespace

InstanceFormat parse_format(const std::string& name) {
  if (name == "matrix-json") return InstanceFormat::kMatrixJson;
  if (name == "tsplib-euc2d") return InstanceFormat::kTsplibEuc2d;
  throw InputError("unknown instance format: " + name);
}

MetricInstance parse_matrix_json(const std::string& text, const LoadOptions& opts) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix-json parse failure: ") + e.what());
  }
  try {
    const int n = doc.at("n").get<int>();
    const int k = opts.k ? *opts.k : doc.at("k").get<int>();
    const auto& rows = doc.at("costs");
    if (n < 2) throw InputError("instance needs at least 2 vertices");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) throw InputError("costs must have n rows");
    std::vector<double> costs;
    costs.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) throw InputError("costs must have n columns");
      for (const auto& c : row)
        costs.push_back(c.is_null() ? std::numeric_limits<double>::infinity() : c.get<double>());
    }
    return finish_instance(n, std::move(costs), k, opts.closure);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix-json schema error: ") + e.what());
  }
}

MetricInstance parse_tsplib_euc2d(const std::string& text, const LoadOptions& opts) {
  if (!opts.k) throw InputError("TSPLIB input needs k");
  std::istringstream in(text);
  std::string line;
  bool coords = false;
  std::vector<std::pair<double, double>> points;
  std::optional<int> dimension;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "EOF") break;
    if (!coords) {
      if (line.rfind("NODE_COORD_SECTION", 0) == 0) {
        coords = true;
        continue;
      }
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(0, colon));
      const std::string value = trim(line.substr(colon + 1));
      if (key == "EDGE_WEIGHT_TYPE" && value != "EUC_2D") throw InputError("only EUC_2D is supported");
      if (key == "DIMENSION") dimension = std::stoi(value);
      continue;
    }
    std::istringstream row(line);
    int id = 0;
    double x = 0, y = 0;
    if (!(row >> id >> x >> y)) throw InputError("malformed NODE_COORD_SECTION line: " + line);
    points.emplace_back(x, y);
  }
  if (!coords) throw InputError("missing NODE_COORD_SECTION");
  if (dimension && *dimension != static_cast<int>(points.size())) throw InputError("DIMENSION does not match node count");
  const int n = static_cast<int>(points.size());
  if (n < 2) throw InputError("instance needs at least 2 vertices");
  std::vector<double> costs(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dx = points[static_cast<std::size_t>(i)].first - points[static_cast<std::size_t>(j)].first;
      const double dy = points[static_cast<std::size_t>(i)].second - points[static_cast<std::size_t>(j)].second;
      costs[static_cast<std::size_t>(i) * n + j] = std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
    }
  return finish_instance(n, std::move(costs), *opts.k, opts.closure);
}

MetricInstance load_instance(const std::string& path, InstanceFormat format, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return format == InstanceFormat::kMatrixJson ? parse_matrix_json(buf.str(), opts)
                                               : parse_tsplib_euc2d(buf.str(), opts);
}

std::string to_matrix_json(const MetricInstance& inst) {
  nlohmann::json doc;
  doc["n"] = inst.n();
  doc["k"] = inst.k();
  auto rows = nlohmann::json::array();
  for (int u = 0; u < inst.n(); ++u) {
    auto row = nlohmann::json::array();
    for (int v = 0; v < inst.n(); ++v) row.push_back(inst.cost(u, v));
    rows.push_back(std::move(row));
  }
  doc["costs"] = std::move(rows);
  return doc.dump();
}

PipelineResult run_pipeline_from_lp(const MetricInstance& inst, const FractionalSolution& lp,
                                    const LambdaWeights* weights, const PipelineOptions& opts,
                                    const std::string& instance_id) {
  const auto start = Clock::now();
  const SplitGraph g0 = build_split_graph(inst, lp, opts.split_vertex);
  PipelineResult out{{}, lp, weights ? *weights : LambdaWeights{}, {}};
  if (!weights) {
    const TreePolytopePoint z = to_tree_point(g0);
    out.weights = fit_max_entropy(g0.graph(), z.z, opts.fit);
  }
  RoundingParams params = RoundingParams::make(inst.k(), opts.alpha, opts.seed);
  params.threads = opts.threads;
  out.rounding = run_rounding(g0, out.weights, params);
  const ConnectivityCertificate cert = verify_k_connectivity(out.rounding.final, inst.n(), inst.k());

  ReportRecord& r = out.record;
  r.instance_id = instance_id;
  r.n = inst.n();
  r.k = inst.k();
  r.alpha = params.alpha;
  r.t = params.trees;
  r.b = params.mst_copies;
  r.seed = opts.seed;
  r.lp_cost = lp.objective;
  r.cost_tstar = out.rounding.cost_t_star;
  r.cost_b = out.rounding.cost_b;
  r.cost_f = out.rounding.cost_f;
  r.total = out.rounding.total_cost();
  r.ratio_lp = lp.objective > 0 ? r.total / lp.objective : 1.0;
  if (opts.with_opt && inst.n() <= 5 && inst.k() <= 6) {
    const double opt = brute_force_opt(inst).cost;
    r.ratio_opt = opt > 0 ? r.total / opt : 1.0;
  }
  r.connected = cert.passes;
  r.augments = out.rounding.augmentations();
  r.eligible = out.rounding.eligible_pairs;
  r.ms = elapsed_ms(start);
  return out;
}

PipelineResult run_pipeline(const MetricInstance& inst, const PipelineOptions& opts, const std::string& instance_id) {
  const auto start = Clock::now();
  const LpResult lp = solve_lp(inst);
  PipelineResult out = run_pipeline_from_lp(inst, lp.solution, nullptr, opts, instance_id);
  out.record.ms = elapsed_ms(start);
  return out;
}

Baseline parse_baseline(const std::string& name) {
  if (name == "karger-independent") return Baseline::kKargerIndependent;
  if (name == "naive-mst-double") return Baseline::kNaiveMstDouble;
  throw InputError("unknown baseline: " + name);
}

ReportRecord run_baseline(const MetricInstance& inst, Baseline which, const PipelineOptions& opts,
                          const std::string& instance_id) {
  const auto start = Clock::now();
  const LpResult lp = solve_lp(inst);
  const Multigraph g{inst.n(), complete_edges(inst.n())};
  std::vector<double> cost;
  for (const Edge& e : g.edges) cost.push_back(inst.cost(e));
  const std::vector<std::size_t> tree = mst(g, cost);
  const auto edge_cost = [&](Edge e) { return inst.cost(e); };

  ReportRecord r;
  r.instance_id = instance_id;
  r.n = inst.n();
  r.k = inst.k();
  r.seed = opts.seed;
  r.lp_cost = lp.solution.objective;

  MultiEdgeSet sampled;
  MultiEdgeSet repair;
  if (which == Baseline::kKargerIndependent) {
    auto rng = RngStream{opts.seed, 0}.engine();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const double x = lp.solution.x[i];
      double whole = std::floor(x);
      // values within solver noise of an integer are treated as integral
      if (x - whole > 1.0 - 1e-9) whole += 1.0;
      const double frac = std::max(0.0, x - whole);
      long copies = static_cast<long>(whole);
      if (frac > 1e-9 && unit(rng) < frac) ++copies;
      sampled.add(g.edges[i], copies);
    }
    while (!verify_k_connectivity(sampled + repair, inst.n(), inst.k()).passes) {
      for (std::size_t id : tree) repair.add(g.edges[id]);
      ++r.b;
    }
    r.t = 0;
  } else {
    const long copies = 2L * ((inst.k() + 1) / 2);
    for (std::size_t id : tree) repair.add(g.edges[id], copies);
    r.b = copies;
    r.t = 0;
  }
  r.cost_tstar = sampled.cost(edge_cost);
  r.cost_b = repair.cost(edge_cost);
  r.total = r.cost_tstar + r.cost_b;
  r.ratio_lp = r.lp_cost > 0 ? r.total / r.lp_cost : 1.0;
  if (opts.with_opt && inst.n() <= 5 && inst.k() <= 6) {
    const double opt = brute_force_opt(inst).cost;
    r.ratio_opt = opt > 0 ? r.total / opt : 1.0;
  }
  r.connected = verify_k_connectivity(sampled + repair, inst.n(), inst.k()).passes;
  r.ms = elapsed_ms(start);
  return r;
}

Family parse_family(const std::string& name) {
  if (name == "euclid" || name == "euclidean") return Family::kEuclidean;
  if (name == "matrix") return Family::kMatrix;
  throw InputError("unknown instance family: " + name);
}

MetricInstance generate_instance(Family family, int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng = RngStream{seed, 0xfa111e5ULL}.engine();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> costs(static_cast<std::size_t>(n) * n, 0.0);
  if (family == Family::kEuclidean) {
    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {unit(rng), unit(rng)};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        costs[static_cast<std::size_t>(i) * n + j] =
            std::hypot(pts[static_cast<std::size_t>(i)].first - pts[static_cast<std::size_t>(j)].first,
                       pts[static_cast<std::size_t>(i)].second - pts[static_cast<std::size_t>(j)].second);
    return {n, std::move(costs), k};
  }
  std::uniform_real_distribution<double> entry(1.0, 100.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = entry(rng);
      costs[static_cast<std::size_t>(i) * n + j] = c;
      costs[static_cast<std::size_t>(j) * n + i] = c;
    }
  return metric_closure(n, costs, k);
}

ExperimentReport run_batch(const BatchSpec& spec) {
  if (spec.ks.empty()) throw InputError("nothing to run");
  if (spec.trials < 1) throw InputError("trials must be at least 1");
  if (spec.instances < 1) throw InputError("instances must be at least 1");

  struct Job {
    int instance;
    int k;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < spec.instances; ++i)
    for (int k : spec.ks) jobs.push_back({i, k});

  std::vector<std::vector<ReportRecord>> per_job(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto work = [&](std::size_t j) {
    try {
      const Job job = jobs[j];
      const auto start = Clock::now();
      const MetricInstance inst =
          generate_instance(spec.family, spec.n, job.k, spec.seed_base + static_cast<std::uint64_t>(job.instance));
      const LpResult lp = solve_lp(inst);
      PipelineOptions opts;
      opts.alpha = spec.alpha;
      opts.with_opt = spec.with_opt;
      const SplitGraph g0 = build_split_graph(inst, lp.solution, opts.split_vertex);
      const LambdaWeights w = fit_max_entropy(g0.graph(), to_tree_point(g0).z, opts.fit);
      const double setup_ms = elapsed_ms(start);
      for (int trial = 0; trial < spec.trials; ++trial) {
        opts.seed = trial_seed(spec.seed_base, job.instance, job.k, trial);
        PipelineResult res = run_pipeline_from_lp(inst, lp.solution, &w, opts, "inst" + std::to_string(job.instance));
        res.record.ms += setup_ms;
        per_job[j].push_back(std::move(res.record));
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(spec.threads, static_cast<unsigned>(jobs.size())));
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) work(j);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned tid = 0; tid < threads; ++tid)
      pool.emplace_back([&, tid] {
        for (std::size_t j = tid; j < jobs.size(); j += threads) work(j);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // jobs are already in (instance, k) order and trials within a job in order
  ExperimentReport report;
  for (auto& rows : per_job)
    for (auto& r : rows) report.records.push_back(std::move(r));
  report.summary = summarize(report.records);
  return report;
}

std::vector<KSummary> summarize(const std::vector<ReportRecord>& records) {
  std::map<int, std::vector<const ReportRecord*>> by_k;
  for (const auto& r : records) by_k[r.k].push_back(&r);
  std::vector<KSummary> out;
  for (const auto& [k, rows] : by_k) {
    KSummary s;
    s.k = k;
    s.runs = rows.size();
    double sum = 0.0;
    double sq = 0.0;
    double opt_sum = 0.0;
    std::size_t opt_count = 0;
    for (const ReportRecord* r : rows) {
      sum += r->ratio_lp;
      sq += r->ratio_lp * r->ratio_lp;
      s.max_ratio_lp = std::max(s.max_ratio_lp, r->ratio_lp);
      if (!r->connected) ++s.failures;
      s.augments += r->augments;
      s.eligible += r->eligible;
      if (r->ratio_opt) {
        opt_sum += *r->ratio_opt;
        ++opt_count;
      }
    }
    const auto n = static_cast<double>(s.runs);
    s.mean_ratio_lp = sum / n;
    if (s.runs > 1) {
      const double var = std::max(0.0, (sq - n * s.mean_ratio_lp * s.mean_ratio_lp) / (n - 1.0));
      s.se_ratio_lp = std::sqrt(var / n);
    }
    if (opt_count > 0) s.mean_ratio_opt = opt_sum / static_cast<double>(opt_count);
    const ApproxFactor f = approx_factor(k);
    s.precise_bound = f.precise;
    s.headline_bound = f.headline;
    out.push_back(s);
  }
  return out;
}

std::string csv_header() {
  return "instance_id,n,k,alpha,t,b,seed,lp_cost,cost_tstar,cost_b,cost_f,total,ratio_lp,ratio_opt,connected,augments,ms";
}

std::string csv_row(const ReportRecord& r) {
  std::ostringstream os;
  os << r.instance_id << ',' << r.n << ',' << r.k << ',' << fmt(r.alpha) << ',' << r.t << ',' << r.b << ',' << r.seed
     << ',' << fmt(r.lp_cost) << ',' << fmt(r.cost_tstar) << ',' << fmt(r.cost_b) << ',' << fmt(r.cost_f) << ','
     << fmt(r.total) << ',' << fmt(r.ratio_lp) << ',' << (r.ratio_opt ? fmt(*r.ratio_opt) : "") << ','
     << (r.connected ? 1 : 0) << ',' << r.augments << ',' << fmt(r.ms);
  return os.str();
}

void append_csv(const std::string& path, const std::vector<ReportRecord>& records) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw InputError("cannot write " + path);
  if (fresh) out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

std::string summary_json(const std::vector<KSummary>& summary) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& s : summary) {
    nlohmann::json entry{{"runs", s.runs},
                         {"mean_ratio_lp", s.mean_ratio_lp},
                         {"max_ratio_lp", s.max_ratio_lp},
                         {"se_ratio_lp", s.se_ratio_lp},
                         {"failures", s.failures},
                         {"augments", s.augments},
                         {"eligible_pairs", s.eligible},
                         {"precise_bound", s.precise_bound},
                         {"headline_bound", s.headline_bound}};
    entry["mean_ratio_opt"] = s.mean_ratio_opt ? nlohmann::json(*s.mean_ratio_opt) : nlohmann::json(nullptr);
    doc[std::to_string(s.k)] = std::move(entry);
  }
  return doc.dump(2);
}

}  // namespace kecsm
