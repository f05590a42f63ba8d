// kecsm: command-line front end for the k-ECSM rounding pipeline.
//
// Exit codes: 0 success, 2 connectivity failure, 3 input error,
// 4 non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "kecsm/harness.hpp"
#include "kecsm/lp.hpp"
#include "kecsm/sampler.hpp"
#include "kecsm/split.hpp"
#include "kecsm/verify.hpp"

namespace {

constexpr int kExitConnectivity = 2;
constexpr int kExitInput = 3;
constexpr int kExitConvergence = 4;

struct CommonFlags {
  std::string input;
  std::string format = "matrix-json";
  bool closure = false;
  std::optional<int> k;
  std::string alpha = "auto";
  std::uint64_t seed = 1;
  int trials = 1;
  std::string emit;
  int split_vertex = 0;
  bool with_opt = false;
  unsigned threads = 1;
};

void add_instance_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--input", f.input, "instance file")->required();
  cmd->add_option("--format", f.format, "matrix-json | tsplib-euc2d");
  cmd->add_flag("--closure", f.closure, "replace costs by their shortest-path closure");
  cmd->add_option("--k", f.k, "required edge connectivity (overrides the file)");
}

std::optional<double> parse_alpha(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw kecsm::InputError("--alpha must be a number or \"auto\"");
  }
}

kecsm::MetricInstance load(const CommonFlags& f) {
  return kecsm::load_instance(f.input, kecsm::parse_format(f.format), {f.k, f.closure});
}

kecsm::PipelineOptions pipeline_options(const CommonFlags& f) {
  kecsm::PipelineOptions opts;
  opts.alpha = parse_alpha(f.alpha);
  opts.seed = f.seed;
  opts.split_vertex = f.split_vertex;
  opts.with_opt = f.with_opt;
  opts.threads = f.threads;
  return opts;
}

std::string summary_path(const std::string& csv) {
  std::filesystem::path p(csv);
  p.replace_extension(".summary.json");
  return p.string();
}

int emit_records(const std::vector<kecsm::ReportRecord>& records, const std::string& emit) {
  std::cout << kecsm::csv_header() << '\n';
  for (const auto& r : records) std::cout << kecsm::csv_row(r) << '\n';
  const auto summary = kecsm::summarize(records);
  if (!emit.empty()) {
    kecsm::append_csv(emit, records);
    std::ofstream(summary_path(emit)) << kecsm::summary_json(summary) << '\n';
  }
  for (const auto& r : records)
    if (!r.connected) return kExitConnectivity;
  return 0;
}

nlohmann::json edge_json(const kecsm::MultiEdgeSet& m) {
  auto arr = nlohmann::json::array();
  for (const auto& [e, c] : m.entries()) arr.push_back({e.u, e.v, c});
  return arr;
}

kecsm::MultiEdgeSet read_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kecsm::InputError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
    kecsm::MultiEdgeSet m;
    const auto& edges = doc.is_object() ? doc.at("edges") : doc;
    for (const auto& e : edges) m.add({e.at(0).get<int>(), e.at(1).get<int>()}, e.size() > 2 ? e.at(2).get<long>() : 1);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw kecsm::InputError(std::string("solution parse failure: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-edge-connected spanning multi-subgraph solver"};
  app.require_subcommand(1);
  CommonFlags f;

  auto* solve = app.add_subcommand("solve", "run the full rounding pipeline");
  add_instance_flags(solve, f);
  solve->add_option("--alpha", f.alpha, "augmentation parameter, number or auto");
  solve->add_option("--seed", f.seed, "random seed");
  solve->add_option("--trials", f.trials, "independent rounding runs");
  solve->add_option("--emit", f.emit, "append report rows to this CSV");
  solve->add_option("--split-vertex", f.split_vertex, "vertex split into u0 and v0");
  solve->add_flag("--with-opt", f.with_opt, "also compute the exact optimum (n <= 5, k <= 6)");
  solve->add_option("--threads", f.threads, "tree sampling threads");

  auto* lp = app.add_subcommand("lp", "solve the LP relaxation");
  add_instance_flags(lp, f);

  auto* sample = app.add_subcommand("sample", "fit max-entropy weights and sample spanning trees of G0");
  add_instance_flags(sample, f);
  sample->add_option("--seed", f.seed, "random seed");
  sample->add_option("--trials", f.trials, "number of trees");
  sample->add_option("--split-vertex", f.split_vertex, "vertex split into u0 and v0");

  std::string solution;
  auto* verify = app.add_subcommand("verify", "certify k-edge-connectivity of a multiset");
  add_instance_flags(verify, f);
  verify->add_option("--solution", solution, "JSON list of [u, v, multiplicity]")->required();

  auto* oracle = app.add_subcommand("oracle", "exact optimum and enumeration LP for tiny instances");
  add_instance_flags(oracle, f);

  std::string family = "euclid";
  int instances = 10;
  int n = 10;
  std::vector<int> ks;
  auto* batch = app.add_subcommand("batch", "random instance experiments");
  batch->add_option("--family", family, "euclid | matrix");
  batch->add_option("--instances", instances, "instances per k");
  batch->add_option("--n", n, "vertices per instance");
  batch->add_option("--k", ks, "connectivity values")->delimiter(',');
  batch->add_option("--alpha", f.alpha, "augmentation parameter, number or auto");
  batch->add_option("--seed", f.seed, "seed base");
  batch->add_option("--trials", f.trials, "rounding runs per instance and k");
  batch->add_option("--emit", f.emit, "append report rows to this CSV");
  batch->add_flag("--with-opt", f.with_opt, "also compute the exact optimum (n <= 5, k <= 6)");
  batch->add_option("--threads", f.threads, "worker threads");

  std::string which = "naive-mst-double";
  auto* baseline = app.add_subcommand("baseline", "baseline roundings for comparison");
  add_instance_flags(baseline, f);
  baseline->add_option("--which", which, "karger-independent | naive-mst-double");
  baseline->add_option("--seed", f.seed, "random seed");
  baseline->add_option("--emit", f.emit, "append report rows to this CSV");
  baseline->add_flag("--with-opt", f.with_opt, "also compute the exact optimum (n <= 5, k <= 6)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const auto inst = load(f);
      auto opts = pipeline_options(f);
      std::vector<kecsm::ReportRecord> records;
      const kecsm::LpResult lpres = kecsm::solve_lp(inst);
      const kecsm::LambdaWeights* weights = nullptr;
      std::optional<kecsm::PipelineResult> first;
      for (int t = 0; t < std::max(1, f.trials); ++t) {
        opts.seed = f.seed + static_cast<std::uint64_t>(t);
        auto res = kecsm::run_pipeline_from_lp(inst, lpres.solution, weights, opts, "input");
        records.push_back(res.record);
        if (!first) {
          first = std::move(res);
          weights = &first->weights;
        }
      }
      return emit_records(records, f.emit);
    }
    if (*lp) {
      const auto inst = load(f);
      const auto res = kecsm::solve_lp(inst);
      nlohmann::json out{{"objective", res.report.objective},
                         {"iterations", res.report.iterations},
                         {"cuts", res.report.cuts},
                         {"final_min_cut", res.report.final_min_cut}};
      auto xs = nlohmann::json::array();
      for (std::size_t i = 0; i < res.solution.edges.size(); ++i)
        if (res.solution.x[i] > 0) xs.push_back({res.solution.edges[i].u, res.solution.edges[i].v, res.solution.x[i]});
      out["x"] = std::move(xs);
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*sample) {
      const auto inst = load(f);
      const auto res = kecsm::solve_lp(inst);
      const auto g0 = kecsm::build_split_graph(inst, res.solution, f.split_vertex);
      const auto w = kecsm::fit_max_entropy(g0.graph(), kecsm::to_tree_point(g0).z);
      const auto trees = kecsm::sample_batch(w, static_cast<std::size_t>(std::max(1, f.trials)), f.seed);
      nlohmann::json out{{"n0", g0.n0()}, {"u0", g0.u0()}, {"v0", g0.v0()}, {"max_ratio", w.max_ratio}};
      auto arr = nlohmann::json::array();
      for (const auto& t : trees) {
        auto edges = nlohmann::json::array();
        for (std::size_t id : t.edge_ids) edges.push_back({g0.edges()[id].u, g0.edges()[id].v});
        arr.push_back(std::move(edges));
      }
      out["trees"] = std::move(arr);
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*verify) {
      const auto inst = load(f);
      const auto m = read_solution(solution);
      const auto cert = kecsm::verify_k_connectivity(m, inst.n(), inst.k());
      nlohmann::json out{{"min_cut", cert.min_cut_value},
                         {"witness", cert.witness.members()},
                         {"passes", cert.passes},
                         {"cost", m.cost([&](kecsm::Edge e) { return inst.cost(e); })}};
      std::cout << out.dump(2) << '\n';
      return cert.passes ? 0 : kExitConnectivity;
    }
    if (*oracle) {
      const auto inst = load(f);
      const auto opt = kecsm::brute_force_opt(inst);
      nlohmann::json out{{"opt", opt.cost}, {"solution", edge_json(opt.solution)}};
      if (inst.n() <= 12) out["lp_enumeration"] = kecsm::solve_lp_enumeration(inst).objective;
      out["lp_cutting_plane"] = kecsm::solve_lp(inst).report.objective;
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*batch) {
      kecsm::BatchSpec spec;
      spec.family = kecsm::parse_family(family);
      spec.instances = instances;
      spec.n = n;
      spec.ks = ks;
      spec.trials = f.trials;
      spec.seed_base = f.seed;
      spec.alpha = parse_alpha(f.alpha);
      spec.with_opt = f.with_opt;
      spec.threads = f.threads;
      const auto report = kecsm::run_batch(spec);
      const int code = emit_records(report.records, f.emit);
      std::cerr << kecsm::summary_json(report.summary) << '\n';
      return code;
    }
    if (*baseline) {
      const auto inst = load(f);
      const auto rec = kecsm::run_baseline(inst, kecsm::parse_baseline(which), pipeline_options(f));
      return emit_records({rec}, f.emit);
    }
  } catch (const kecsm::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const kecsm::ConvergenceError& e) {
    std::cerr << "did not converge: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const kecsm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
