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

#include "ptim/oracle.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ptim/format.h"
#include "ptim/parallel.h"
#include "ptim/random.h"

namespace ptim {

CounterexampleFixture make_counterexample_fixture() {
  using F = CounterexampleFixture;
  CounterexampleFixture fx;
  fx.graph = DirectedGraph::from_edges(4, {{F::kA, F::kC}, {F::kB, F::kC}, {F::kC, F::kD}});
  const WeightAssignment w[] = {{F::kA, F::kC, 0.4}, {F::kB, F::kC, 0.4}, {F::kC, F::kD, 0.3}};
  fx.weights = explicit_weights(fx.graph, w);
  fx.thresholds = ThresholdAssignment({1.0, 1.0, 0.8, 0.4});
  fx.alpha = 1.0;
  return fx;
}

CounterexampleSpreads verify_counterexample() {
  using F = CounterexampleFixture;
  const auto fx = make_counterexample_fixture();
  auto spread = [&](std::initializer_list<NodeId> seeds) {
    const std::vector<NodeId> s(seeds);
    return static_cast<double>(
        run_pt(fx.graph, fx.weights, fx.thresholds, s, fx.alpha).active_count());
  };
  CounterexampleSpreads r;
  r.sigma_s = spread({F::kA});
  r.sigma_s_c = spread({F::kA, F::kC});
  r.sigma_t = spread({F::kA, F::kB});
  r.sigma_t_c = spread({F::kA, F::kB, F::kC});
  if (r.sigma_s != 1 || r.sigma_s_c != 2 || r.sigma_t != 4 || r.sigma_t_c != 3) {
    std::ostringstream msg;
    msg << "counterexample spreads (" << r.sigma_s << ", " << r.sigma_s_c << ", " << r.sigma_t
        << ", " << r.sigma_t_c << ") differ from (1, 2, 4, 3)";
    throw std::logic_error(msg.str());
  }
  return r;
}

std::string PropertyReport::summary_line() const {
  std::ostringstream out;
  out << suite << ": trials: " << trials << ", violations: " << violations
      << ", weight_checks: " << weight_checks << ", weight_violations: " << weight_violations;
  if (first_violation_witness) {
    const auto& w = *first_violation_witness;
    out << ", first_violation: trial=" << w.trial << " instance_seed=" << w.instance_seed
        << " threshold_seed=" << w.threshold_seed << " " << w.detail;
  }
  return out.str();
}

RandomInstance make_random_instance(std::uint64_t seed, std::size_t max_nodes) {
  if (max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
  std::mt19937_64 rng(derive_seed(seed, 0x1257));
  auto uniform = [&] { return unit_closed_open(rng()); };

  const std::size_t n = 1 + static_cast<std::size_t>(rng() % max_nodes);
  const double density = 0.05 + 0.35 * uniform();
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && uniform() < density) edges.emplace_back(u, v);
    }
  }
  RandomInstance inst;
  inst.instance_seed = seed;
  inst.threshold_seed = derive_seed(seed, 0x7e7a);
  inst.graph = DirectedGraph::from_edges(n, std::move(edges));

  if (uniform() < 0.5) {
    inst.weights = weighted_cascade(inst.graph);
  } else {
    std::vector<double> base(inst.graph.edge_count());
    for (NodeId v = 0; v < n; ++v) {
      const auto ids = inst.graph.in_edge_ids(v);
      if (ids.empty()) continue;
      double total = 0.0;
      for (EdgeId e : ids) total += (base[e] = uniform() + 1e-3);
      const double budget = 0.3 + 0.7 * uniform();
      for (EdgeId e : ids) base[e] = base[e] / total * budget;
    }
    inst.weights = EdgeWeightMap(inst.graph, std::move(base));
  }
  inst.thresholds = sample_thresholds(inst.graph, inst.threshold_seed);
  return inst;
}

std::int64_t count_weight_cap_violations(const DirectedGraph& graph, const EdgeWeightMap& weights,
                                         const DiffusionOutcome& outcome, double alpha,
                                         std::int64_t* checked) {
  std::int64_t bad = 0;
  for (const auto& a : outcome.amplified_edges) {
    const double base = weights.base(a.edge);
    const auto& influence = outcome.received_influence[a.source];
    const bool consistent = graph.edge_source(a.edge) == a.source &&
                            graph.edge_target(a.edge) == a.target && a.old_weight == base &&
                            influence.has_value() &&
                            a.new_weight == std::min(1.0, base + alpha * *influence);
    if (!consistent || a.new_weight < base || a.new_weight > 1.0) ++bad;
  }
  if (checked != nullptr) *checked = static_cast<std::int64_t>(outcome.amplified_edges.size());
  return bad;
}

namespace {

std::string format_set(std::span<const NodeId> nodes) {
  std::string s = "{";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(nodes[i]);
  }
  return s + "}";
}

bool is_subset(const DiffusionOutcome& small, const DiffusionOutcome& large) {
  for (NodeId v : small.activation_order) {
    if (!large.is_active(v)) return false;
  }
  return true;
}

struct TrialResult {
  bool violated = false;
  std::int64_t weight_checks = 0;
  std::int64_t weight_violations = 0;
  std::string detail;
};

// Runs `trial(index, instance)` over independent instances and reduces in
// trial order.
template <class Trial>
PropertyReport run_suite(std::string suite, std::int64_t trials, std::uint64_t rng_seed,
                         unsigned workers, Trial&& trial) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  parallel_for(results.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto inst = make_random_instance(derive_seed(rng_seed, i));
      results[i] = trial(i, inst);
    }
  });
  PropertyReport report;
  report.suite = std::move(suite);
  report.trials = trials;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    report.weight_checks += r.weight_checks;
    report.weight_violations += r.weight_violations;
    if (!r.violated && r.weight_violations == 0) continue;
    if (r.violated) ++report.violations;
    if (!report.first_violation_witness) {
      const std::uint64_t instance_seed = derive_seed(rng_seed, i);
      report.first_violation_witness = PropertyWitness{
          static_cast<std::int64_t>(i), instance_seed, derive_seed(instance_seed, 0x7e7a),
          r.detail};
    }
  }
  return report;
}

std::vector<NodeId> random_subset(std::span<const NodeId> pool, double keep, std::mt19937_64& rng) {
  std::vector<NodeId> out;
  for (NodeId v : pool) {
    if (unit_closed_open(rng()) < keep) out.push_back(v);
  }
  return out;
}

void tally_weights(const RandomInstance& inst, const DiffusionOutcome& outcome, double alpha,
                   TrialResult& r) {
  std::int64_t checked = 0;
  r.weight_violations += count_weight_cap_violations(inst.graph, inst.weights, outcome, alpha, &checked);
  r.weight_checks += checked;
}

}  // namespace

PropertyReport check_alpha_zero_equivalence(std::int64_t trials, std::uint64_t rng_seed,
                                            unsigned workers) {
  return run_suite("alpha_zero_equivalence", trials, rng_seed, workers,
                   [](std::size_t i, const RandomInstance& inst) {
                     std::mt19937_64 rng(derive_seed(inst.instance_seed, 0x5eed));
                     std::vector<NodeId> all(inst.graph.node_count());
                     for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
                     const auto seeds = random_subset(all, 0.05 + 0.3 * unit_closed_open(rng()), rng);
                     const auto lt = run_lt(inst.graph, inst.weights, inst.thresholds, seeds);
                     const auto pt = run_pt(inst.graph, inst.weights, inst.thresholds, seeds, 0.0);
                     TrialResult r;
                     r.violated = lt.activation_round != pt.activation_round ||
                                  lt.active_set() != pt.active_set() || !pt.amplified_edges.empty();
                     if (r.violated) r.detail = "seeds=" + format_set(seeds);
                     (void)i;
                     return r;
                   });
}

PropertyReport check_monotonicity(const ModelSpec& model, std::int64_t trials,
                                  std::uint64_t rng_seed, unsigned workers) {
  model.validate();
  return run_suite(
      "monotonicity[" + model.label() + "]", trials, rng_seed, workers,
      [&model](std::size_t i, const RandomInstance& inst) {
        std::mt19937_64 rng(derive_seed(inst.instance_seed, 0xab));
        std::vector<NodeId> all(inst.graph.node_count());
        for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
        const auto b = random_subset(all, 0.05 + 0.4 * unit_closed_open(rng()), rng);
        std::vector<NodeId> a;
        switch (i % 10) {
          case 0:
            a = b;
            break;
          case 1:
            break;
          default:
            a = random_subset(b, unit_closed_open(rng()), rng);
        }
        const auto out_a = run_diffusion(inst.graph, inst.weights, model, inst.thresholds, a);
        const auto out_b = run_diffusion(inst.graph, inst.weights, model, inst.thresholds, b);
        TrialResult r;
        r.violated = !is_subset(out_a, out_b);
        if (r.violated) r.detail = "A=" + format_set(a) + " B=" + format_set(b);
        if (model.is_pt()) {
          tally_weights(inst, out_a, model.alpha, r);
          tally_weights(inst, out_b, model.alpha, r);
        }
        return r;
      });
}

PropertyReport check_lt_dominated_by_pt(std::int64_t trials, std::uint64_t rng_seed,
                                        unsigned workers) {
  return run_suite("lt_dominated_by_pt", trials, rng_seed, workers,
                   [](std::size_t, const RandomInstance& inst) {
                     std::mt19937_64 rng(derive_seed(inst.instance_seed, 0xd0));
                     // Log-uniform over [1e-4, 2].
                     const double alpha = 1e-4 * std::pow(2e4, unit_closed_open(rng()));
                     std::vector<NodeId> all(inst.graph.node_count());
                     for (NodeId v = 0; v < all.size(); ++v) all[v] = v;
                     const auto seeds = random_subset(all, 0.05 + 0.3 * unit_closed_open(rng()), rng);
                     const auto lt = run_lt(inst.graph, inst.weights, inst.thresholds, seeds);
                     const auto pt = run_pt(inst.graph, inst.weights, inst.thresholds, seeds, alpha);
                     TrialResult r;
                     r.violated = !is_subset(lt, pt);
                     if (r.violated) {
                       r.detail = "alpha=" + format_double(alpha) + " seeds=" + format_set(seeds);
                     }
                     tally_weights(inst, pt, alpha, r);
                     return r;
                   });
}

ReferenceOutcome reference_diffusion(const DirectedGraph& graph, const EdgeWeightMap& weights,
                                     const ModelSpec& model, const ThresholdAssignment& thresholds,
                                     std::span<const NodeId> seeds) {
  model.validate();
  const std::size_t n = graph.node_count();
  std::vector<double> w(weights.values().begin(), weights.values().end());
  std::vector<bool> active(n, false);
  ReferenceOutcome out;
  out.activation_round.assign(n, DiffusionOutcome::kInactive);
  out.received_influence.assign(n, 0.0);
  for (NodeId s : seeds) {
    if (s >= n) throw std::out_of_range("seed is not a node");
    active[s] = true;
    out.activation_round[s] = 0;
  }

  for (std::int32_t round = 1;; ++round) {
    std::vector<std::pair<NodeId, double>> newly;
    for (NodeId v = 0; v < n; ++v) {
      if (active[v]) continue;
      double influence = 0.0;
      const auto sources = graph.in_neighbors(v);
      const auto ids = graph.in_edge_ids(v);
      for (std::size_t i = 0; i < sources.size(); ++i) {
        if (active[sources[i]]) influence += w[ids[i]];
      }
      if (influence >= thresholds[v]) newly.emplace_back(v, influence);
    }
    if (newly.empty()) break;
    if (model.is_pt()) {
      for (const auto& [v, influence] : newly) {
        EdgeId e = graph.out_edge_begin(v);
        for (NodeId s : graph.out_neighbors(v)) {
          if (!active[s]) w[e] = std::min(1.0, w[e] + model.alpha * influence);
          ++e;
        }
      }
    }
    for (const auto& [v, influence] : newly) {
      active[v] = true;
      out.activation_round[v] = round;
      out.received_influence[v] = influence;
    }
  }
  out.active_count = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
  return out;
}

ReferenceSpread reference_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                                 const ModelSpec& model, std::span<const NodeId> seeds,
                                 double precision_target, std::uint64_t rng_seed,
                                 const ThresholdAssignment* fixed_thresholds) {
  if (!(precision_target > 0.0)) throw std::invalid_argument("precision_target must be > 0");
  if (fixed_thresholds != nullptr) {
    const auto out = reference_diffusion(graph, weights, model, *fixed_thresholds, seeds);
    return {{static_cast<double>(out.active_count), 0.0, 1, rng_seed}, true};
  }

  constexpr std::int64_t kMinSims = 100;
  constexpr std::int64_t kMaxSims = 1'000'000;
  std::mt19937_64 rng(rng_seed);
  std::vector<double> theta(graph.node_count());
  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t sims = 0;
  auto std_error = [&] { return sims > 1 ? std::sqrt(m2 / double(sims - 1) / double(sims)) : 0.0; };
  while (sims < kMaxSims) {
    for (auto& t : theta) t = unit_open_closed(rng());
    const auto out = reference_diffusion(graph, weights, model, ThresholdAssignment(theta), seeds);
    ++sims;
    const double x = static_cast<double>(out.active_count);
    const double delta = x - mean;
    mean += delta / static_cast<double>(sims);
    m2 += delta * (x - mean);
    if (sims >= kMinSims && std_error() <= precision_target) break;
  }
  const bool converged = std_error() <= precision_target;
  return {{mean, std_error(), sims, rng_seed}, converged};
}

}  // namespace ptim
