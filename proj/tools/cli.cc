// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "ptim/diffusion.h"
#include "ptim/experiments.h"
#include "ptim/format.h"
#include "ptim/graph.h"
#include "ptim/influence_max.h"
#include "ptim/oracle.h"

namespace ptim {

namespace {

struct GraphOptions {
  std::string graph_path;
  std::string format = "edge-list-directed";
  bool undirected = false;
  std::string fixture;
};

struct ModelOptions {
  std::string model = "lt";
  double alpha = 0.0;
};

struct Problem {
  DirectedGraph graph;
  EdgeWeightMap weights;
  std::optional<ThresholdAssignment> fixed_thresholds;
  bool is_fixture = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_graph_options(CLI::App* cmd, GraphOptions& opts) {
  cmd->add_option("--graph", opts.graph_path, "Edge-list file");
  cmd->add_option("--format", opts.format,
                  "edge-list-directed | edge-list-undirected | csv");
  cmd->add_flag("--undirected", opts.undirected, "Treat each edge as two directed edges");
  cmd->add_option("--fixture", opts.fixture, "Built-in instance: counterexample");
}

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
  cmd->add_option("--model", opts.model, "lt | pt | pt:<alpha>");
  cmd->add_option("--alpha", opts.alpha, "Amplification parameter for pt");
}

ModelSpec resolve_model(const ModelOptions& opts) {
  return parse_model(opts.model, opts.alpha);
}

Problem load_problem(const GraphOptions& opts) {
  Problem p;
  if (!opts.fixture.empty()) {
    if (opts.fixture != "counterexample") throw UsageError("unknown fixture '" + opts.fixture + "'");
    if (!opts.graph_path.empty()) throw UsageError("--fixture and --graph are mutually exclusive");
    auto fx = make_counterexample_fixture();
    p.graph = std::move(fx.graph);
    p.weights = std::move(fx.weights);
    p.fixed_thresholds = std::move(fx.thresholds);
    p.is_fixture = true;
    return p;
  }
  if (opts.graph_path.empty()) throw UsageError("one of --graph or --fixture is required");
  GraphFormat format = parse_graph_format(opts.format);
  if (opts.undirected) {
    if (format == GraphFormat::kCsv) throw UsageError("--undirected cannot be combined with csv");
    format = GraphFormat::kEdgeListUndirected;
  }
  p.graph = load_edge_list(GraphSource::from_file(opts.graph_path, format));
  p.weights = weighted_cascade(p.graph);
  return p;
}

// Comma-separated original ids; the counterexample fixture also takes a-d.
std::vector<NodeId> resolve_seeds(const Problem& p, const std::string& text) {
  std::vector<NodeId> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    if (p.is_fixture && item.size() == 1 && item[0] >= 'a' && item[0] <= 'd') {
      seeds.push_back(static_cast<NodeId>(item[0] - 'a'));
      continue;
    }
    OriginalId id = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("malformed seed '" + item + "'");
    }
    auto dense = p.graph.dense_id(id);
    if (!dense) throw UsageError("seed " + item + " is not a node of the graph");
    seeds.push_back(*dense);
  }
  return seeds;
}

void write_output(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
}

std::string join_ids(const DirectedGraph& g, std::span<const NodeId> nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(g.original_id(nodes[i]));
  }
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pressure/Linear Threshold diffusion and influence maximization", "ptim"};
  app.require_subcommand(1);
  unsigned workers = 1;
  std::uint64_t rng_seed = 0;

  // simulate
  GraphOptions sim_graph;
  ModelOptions sim_model;
  std::string sim_seeds;
  std::int64_t sim_sims = 1000;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Estimate the spread of a seed set");
  add_graph_options(simulate, sim_graph);
  add_model_options(simulate, sim_model);
  simulate->add_option("--seeds", sim_seeds, "Comma-separated original node ids")->required();
  simulate->add_option("--sims", sim_sims, "Monte-Carlo simulations");
  simulate->add_option("--rng-seed", rng_seed, "Random seed");
  simulate->add_option("--out", sim_out, "Write the trace of simulation 0 as CSV");
  simulate->add_option("--workers", workers, "Worker threads");

  // maximize
  GraphOptions max_graph;
  ModelOptions max_model;
  std::int64_t max_budget = 10;
  std::int64_t max_sims = 1000;
  std::string max_out;
  std::string max_algorithm = "celf";
  bool max_fresh = false;
  auto* maximize = app.add_subcommand("maximize", "Select seeds with CELF or plain greedy");
  add_graph_options(maximize, max_graph);
  add_model_options(maximize, max_model);
  maximize->add_option("--budget", max_budget, "Number of seeds k");
  maximize->add_option("--sims", max_sims, "Monte-Carlo simulations per evaluation");
  maximize->add_option("--rng-seed", rng_seed, "Random seed");
  maximize->add_option("--out", max_out, "Result CSV (default: stdout)");
  maximize->add_option("--workers", workers, "Worker threads");
  maximize->add_option("--algorithm", max_algorithm, "celf | greedy")
      ->check(CLI::IsMember({"celf", "greedy"}));
  maximize->add_flag("--fresh-samples", max_fresh, "Draw fresh simulations for every evaluation");

  // properties
  std::int64_t prop_trials = 1000;
  std::string prop_out;
  auto* properties = app.add_subcommand("properties", "Run the property and oracle suites");
  properties->add_option("--trials", prop_trials, "Randomized trials per suite");
  properties->add_option("--rng-seed", rng_seed, "Random seed");
  properties->add_option("--workers", workers, "Worker threads");
  properties->add_option("--out", prop_out, "Also write the report to a file");

  // experiments
  std::string exp_config;
  std::string exp_out;
  std::optional<unsigned> exp_workers;
  std::vector<CLI::App*> exps;
  for (const char* name : {"exp1", "exp2", "exp3"}) {
    auto* cmd = app.add_subcommand(name, std::string("Run experiment ") + name);
    cmd->add_option("--config", exp_config, "Experiment config file")->required();
    cmd->add_option("--out", exp_out, "Output directory (overrides output_dir)");
    cmd->add_option("--workers", exp_workers, "Worker threads (overrides workers)");
    exps.push_back(cmd);
  }

  // gen-er
  std::size_t er_n = 0;
  double er_p = 0.0;
  std::string er_out;
  auto* gen_er = app.add_subcommand("gen-er", "Generate an Erdos-Renyi edge list");
  gen_er->add_option("--n", er_n, "Number of nodes")->required();
  gen_er->add_option("--p", er_p, "Pair probability")->required();
  gen_er->add_option("--rng-seed", rng_seed, "Random seed");
  gen_er->add_option("--out", er_out, "Output file (default: stdout)");

  // validate
  GraphOptions val_graph;
  auto* validate = app.add_subcommand("validate", "Report the structure of a graph file");
  add_graph_options(validate, val_graph);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*simulate) {
      const auto model = resolve_model(sim_model);
      const auto p = load_problem(sim_graph);
      const auto seeds = resolve_seeds(p, sim_seeds);
      SpreadEstimate est;
      DiffusionOutcome trace;
      if (p.fixed_thresholds) {
        est = estimate_spread(p.graph, p.weights, model, seeds, *p.fixed_thresholds);
        if (!sim_out.empty()) trace = run_diffusion(p.graph, p.weights, model, *p.fixed_thresholds, seeds);
      } else {
        est = estimate_spread(p.graph, p.weights, model, seeds, sim_sims, rng_seed, workers);
        if (!sim_out.empty()) {
          trace = run_diffusion(p.graph, p.weights, model,
                                sample_thresholds(p.graph, simulation_seed(rng_seed, 0)), seeds);
        }
      }
      out << "model: " << model.label() << "\n"
          << "seeds: " << join_ids(p.graph, seeds) << "\n"
          << "num_sims: " << est.num_sims << "\n"
          << "spread: " << format_double(est.mean) << "\n"
          << "std_error: " << format_double(est.std_error) << "\n";
      if (!sim_out.empty()) write_output(sim_out, write_trace_csv(p.graph, trace));
      return 0;
    }

    if (*maximize) {
      const auto model = resolve_model(max_model);
      const auto p = load_problem(max_graph);
      EstimatorConfig est;
      est.num_sims = max_sims;
      est.rng_seed = rng_seed;
      est.shared_sample_pool = !max_fresh;
      est.workers = workers;
      est.fixed_thresholds = p.fixed_thresholds;
      const auto result = max_algorithm == "celf"
                              ? celf(p.graph, p.weights, model, max_budget, est)
                              : greedy_naive(p.graph, p.weights, model, max_budget, est);
      const auto csv = write_celf_csv(p.graph, result);
      if (max_out.empty()) {
        out << csv;
      } else {
        write_output(max_out, csv);
        out << "seeds: " << join_ids(p.graph, result.seeds_in_order) << "\n"
            << "evaluations: " << result.evaluations << "\n";
      }
      return 0;
    }

    if (*properties) {
      std::ostringstream report;
      bool ok = true;
      try {
        const auto cx = verify_counterexample();
        report << "counterexample: spreads (" << format_double(cx.sigma_s) << ", "
               << format_double(cx.sigma_s_c) << ", " << format_double(cx.sigma_t) << ", "
               << format_double(cx.sigma_t_c) << "), gains (" << format_double(cx.gain_s())
               << ", " << format_double(cx.gain_t()) << "), violations: 0\n";
      } catch (const std::logic_error& e) {
        report << "counterexample: violations: 1 (" << e.what() << ")\n";
        ok = false;
      }
      std::vector<PropertyReport> reports;
      reports.push_back(check_alpha_zero_equivalence(prop_trials, rng_seed, workers));
      for (const auto& model : {ModelSpec::lt(), ModelSpec::pt(0.01), ModelSpec::pt(0.1),
                                ModelSpec::pt(1.0)}) {
        reports.push_back(check_monotonicity(model, prop_trials, rng_seed, workers));
      }
      reports.push_back(check_lt_dominated_by_pt(prop_trials, rng_seed, workers));
      for (const auto& r : reports) {
        report << r.summary_line() << "\n";
        ok = ok && r.ok();
      }
      out << report.str();
      if (!prop_out.empty()) write_output(prop_out, report.str());
      if (!ok) {
        err << "property violations detected\n";
        return 1;
      }
      return 0;
    }

    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (!*exps[i]) continue;
      auto config = load_experiment_config(exp_config);
      if (!exp_out.empty()) config.output_dir = exp_out;
      if (exp_workers) config.workers = *exp_workers;
      if (config.output_dir.empty()) config.output_dir = ".";
      if (i == 0) {
        const auto t = exp1_seed_timeline(config);
        out << t.first_model << ": ";
        for (auto v : t.first) out << v << ' ';
        out << "\n" << t.second_model << ": ";
        for (auto v : t.second) out << v << ' ';
        out << "\noverlap: " << t.overlap << "/" << t.first.size() << "\n";
      } else if (i == 1) {
        const auto curves = exp2_budget_curves(config);
        for (const auto& curve : curves) {
          for (const auto& pt : curve) {
            out << pt.model << " k=" << pt.k << " mean=" << format_double(pt.mean_influence)
                << " stderr=" << format_double(pt.std_error) << "\n";
          }
        }
      } else {
        const auto sweep = exp3_alpha_sweep(config);
        out << "alpha_points: " << sweep.alpha.size() << "\nfit:";
        for (double c : sweep.fit) out << ' ' << format_double(c);
        out << "\n";
      }
      out << "output_dir: " << config.output_dir << "\n";
      return 0;
    }

    if (*gen_er) {
      const auto er = generate_erdos_renyi(er_n, er_p, rng_seed);
      std::ostringstream text;
      text << "# erdos-renyi n=" << er_n << " p=" << format_double(er_p) << " seed=" << rng_seed
           << " undirected_edges=" << er.undirected_edge_count << "\n"
           << write_edge_list(er.graph);
      if (er_out.empty()) {
        out << text.str();
      } else {
        write_output(er_out, text.str());
        out << "nodes: " << er.graph.node_count() << "\n"
            << "undirected_edges: " << er.undirected_edge_count << "\n"
            << "directed_edges: " << er.graph.edge_count() << "\n";
      }
      return 0;
    }

    if (*validate) {
      if (!val_graph.fixture.empty()) throw UsageError("validate takes --graph only");
      if (val_graph.graph_path.empty()) throw UsageError("--graph is required");
      GraphFormat format = parse_graph_format(val_graph.format);
      if (val_graph.undirected) format = GraphFormat::kEdgeListUndirected;
      LoadStats stats;
      const auto g = load_edge_list(GraphSource::from_file(val_graph.graph_path, format), &stats);
      const auto w = weighted_cascade(g);
      bool symmetric = true;
      std::size_t isolated = 0;
      std::size_t max_in = 0;
      double max_norm_error = 0.0;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        for (NodeId s : g.out_neighbors(v)) symmetric = symmetric && g.find_edge(s, v).has_value();
        if (g.in_degree(v) == 0 && g.out_degree(v) == 0) ++isolated;
        max_in = std::max(max_in, g.in_degree(v));
        if (g.in_degree(v) > 0) {
          max_norm_error = std::max(max_norm_error, std::abs(w.incoming_sum(g, v) - 1.0));
        }
      }
      out << "format: " << to_string(format) << "\n"
          << "nodes: " << g.node_count() << "\n"
          << "directed_edges: " << g.edge_count() << "\n"
          << "edge_lines: " << stats.edges_read << "\n"
          << "self_loops_dropped: " << stats.self_loops_dropped << "\n"
          << "duplicates_collapsed: " << stats.duplicates_collapsed << "\n"
          << "isolated_nodes: " << isolated << "\n"
          << "max_in_degree: " << max_in << "\n"
          << "symmetric: " << (symmetric ? "yes" : "no") << "\n"
          << "weighted_cascade_max_error: " << format_double(max_norm_error) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ptim
