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

#include "ptim/influence_max.h"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "ptim/format.h"
#include "ptim/random.h"

namespace ptim {

namespace {

constexpr std::uint64_t kFreshStreamTag = 0x6672657368ULL;

void check_inputs(const DirectedGraph& graph, const ModelSpec& model, std::int64_t k,
                  const EstimatorConfig& est) {
  if (k < 0) throw std::invalid_argument("budget k must be >= 0");
  model.validate();
  est.validate();
  if (est.fixed_thresholds && est.fixed_thresholds->size() != graph.node_count()) {
    throw std::invalid_argument("fixed thresholds do not match node count");
  }
}

struct Candidate {
  double gain;
  double value;  // estimated spread of seeds + node
  NodeId node;
  std::int64_t fresh_at;  // greedy step the gain was computed for
};

// Max-heap order: larger gain first, then lower node id.
struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  }
};

class Selection {
 public:
  explicit Selection(std::size_t steps) {
    result_.seeds_in_order.reserve(steps);
  }

  const std::vector<NodeId>& seeds() const { return result_.seeds_in_order; }
  double current() const { return current_; }

  void accept(const Candidate& c, std::int64_t evaluations) {
    const double clamped = std::max(0.0, c.gain);
    const double previous =
        result_.cumulative_spread.empty() ? 0.0 : result_.cumulative_spread.back();
    result_.seeds_in_order.push_back(c.node);
    result_.raw_gain.push_back(c.gain);
    result_.marginal_gain.push_back(clamped);
    result_.cumulative_spread.push_back(previous + clamped);
    result_.evaluations_so_far.push_back(evaluations);
    result_.evaluations = evaluations;
    current_ = c.value;
  }

  CelfResult take(std::int64_t evaluations) {
    result_.evaluations = evaluations;
    return std::move(result_);
  }

 private:
  CelfResult result_;
  double current_ = 0.0;
};

}  // namespace

void EstimatorConfig::validate() const {
  if (num_sims < 1) throw std::invalid_argument("num_sims must be >= 1");
}

double evaluate_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                       const ModelSpec& model, std::span<const NodeId> seeds,
                       const EstimatorConfig& est, std::int64_t evaluation_index) {
  if (est.fixed_thresholds) {
    return estimate_spread(graph, weights, model, seeds, *est.fixed_thresholds).mean;
  }
  const std::uint64_t seed =
      est.shared_sample_pool
          ? est.rng_seed
          : derive_seed(est.rng_seed, kFreshStreamTag, static_cast<std::uint64_t>(evaluation_index));
  return estimate_spread(graph, weights, model, seeds, est.num_sims, seed, est.workers).mean;
}

CelfResult celf(const DirectedGraph& graph, const EdgeWeightMap& weights, const ModelSpec& model,
                std::int64_t k, const EstimatorConfig& est) {
  check_inputs(graph, model, k, est);
  const std::size_t steps = std::min<std::size_t>(static_cast<std::size_t>(k), graph.node_count());
  Selection selection(steps);
  if (steps == 0) return selection.take(0);

  std::int64_t evaluations = 0;
  std::vector<NodeId> trial;
  auto evaluate_with = [&](NodeId v) {
    trial = selection.seeds();
    trial.push_back(v);
    return evaluate_spread(graph, weights, model, trial, est, evaluations++);
  };

  std::vector<Candidate> initial;
  initial.reserve(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const double value = evaluate_with(v);
    initial.push_back({value, value, v, 0});
  }
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess> queue(
      CandidateLess{}, std::move(initial));

  for (std::size_t step = 0; step < steps; ++step) {
    const auto fresh = static_cast<std::int64_t>(step);
    while (true) {
      Candidate top = queue.top();
      queue.pop();
      if (top.fresh_at == fresh) {
        selection.accept(top, evaluations);
        break;
      }
      top.value = evaluate_with(top.node);
      top.gain = top.value - selection.current();
      top.fresh_at = fresh;
      queue.push(top);
    }
  }
  return selection.take(evaluations);
}

CelfResult greedy_naive(const DirectedGraph& graph, const EdgeWeightMap& weights,
                        const ModelSpec& model, std::int64_t k, const EstimatorConfig& est) {
  check_inputs(graph, model, k, est);
  const std::size_t steps = std::min<std::size_t>(static_cast<std::size_t>(k), graph.node_count());
  Selection selection(steps);
  std::vector<bool> chosen(graph.node_count(), false);
  std::int64_t evaluations = 0;
  std::vector<NodeId> trial;

  for (std::size_t step = 0; step < steps; ++step) {
    std::optional<Candidate> best;
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      if (chosen[v]) continue;
      trial = selection.seeds();
      trial.push_back(v);
      const double value = evaluate_spread(graph, weights, model, trial, est, evaluations++);
      const double gain = value - selection.current();
      if (!best || gain > best->gain) best = Candidate{gain, value, v, static_cast<std::int64_t>(step)};
    }
    chosen[best->node] = true;
    selection.accept(*best, evaluations);
  }
  return selection.take(evaluations);
}

std::string write_celf_csv(const DirectedGraph& graph, const CelfResult& result) {
  std::string out = "step,node_id,marginal_gain,cumulative_spread,evaluations_so_far\n";
  for (std::size_t i = 0; i < result.seeds_in_order.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(graph.original_id(result.seeds_in_order[i]));
    out += ',';
    out += format_double(result.marginal_gain[i]);
    out += ',';
    out += format_double(result.cumulative_spread[i]);
    out += ',';
    out += std::to_string(result.evaluations_so_far[i]);
    out += '\n';
  }
  return out;
}

}  // namespace ptim
