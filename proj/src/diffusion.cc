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

#include "ptim/diffusion.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "ptim/format.h"
#include "ptim/parallel.h"

namespace ptim {

ThresholdAssignment::ThresholdAssignment(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double t : theta_) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw std::invalid_argument("threshold outside (0, 1]: " + std::to_string(t));
    }
  }
}

ThresholdAssignment sample_thresholds(const DirectedGraph& graph, std::uint64_t rng_seed) {
  const HashedThresholds hashed{rng_seed};
  std::vector<double> theta(graph.node_count());
  for (NodeId v = 0; v < theta.size(); ++v) theta[v] = hashed[v];
  return ThresholdAssignment(std::move(theta));
}

void ModelSpec::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("alpha must be a finite value >= 0, got " + format_double(alpha));
  }
}

std::string ModelSpec::label() const {
  return is_pt() ? "pt:" + format_double(alpha) : "lt";
}

ModelSpec parse_model(std::string_view text, double default_alpha) {
  if (text == "lt") return ModelSpec::lt();
  if (text == "pt") {
    ModelSpec m = ModelSpec::pt(default_alpha);
    m.validate();
    return m;
  }
  if (text.starts_with("pt:")) {
    const auto num = text.substr(3);
    double alpha = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), alpha);
    if (num.empty() || ec != std::errc() || ptr != num.data() + num.size()) {
      throw std::invalid_argument("malformed alpha in model '" + std::string(text) + "'");
    }
    ModelSpec m = ModelSpec::pt(alpha);
    m.validate();
    return m;
  }
  throw std::invalid_argument("unknown model '" + std::string(text) + "' (expected lt or pt:<alpha>)");
}

std::vector<NodeId> DiffusionOutcome::active_set() const {
  std::vector<NodeId> set = activation_order;
  std::sort(set.begin(), set.end());
  return set;
}

WeightOverlay DiffusionOutcome::overlay() const {
  WeightOverlay overlay;
  for (const auto& a : amplified_edges) overlay.set(a.edge, a.new_weight);
  return overlay;
}

namespace {

// Per-run scratch space, reset in O(touched) between simulations.
class Workspace {
 public:
  explicit Workspace(std::size_t n)
      : accum_(n, 0.0), round_(n, DiffusionOutcome::kInactive), influence_(n, 0.0), stamp_(n, 0) {}

  void reset() {
    for (NodeId v : touched_) accum_[v] = 0.0;
    for (NodeId v : activated_) round_[v] = DiffusionOutcome::kInactive;
    touched_.clear();
    activated_.clear();
  }

  std::vector<double> accum_;
  std::vector<std::int32_t> round_;
  std::vector<double> influence_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> touched_;
  std::vector<NodeId> activated_;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> candidates_;
  std::vector<NodeId> next_;
  std::int32_t rounds_ = 0;
};

struct NoRecorder {
  static constexpr bool kEnabled = false;
  void amplified(EdgeId, NodeId, NodeId, double, double, bool) {}
};

struct EdgeRecorder {
  static constexpr bool kEnabled = true;
  std::vector<AmplifiedEdge>* edges;
  std::size_t same_round = 0;
  void amplified(EdgeId e, NodeId v, NodeId s, double old_w, double new_w, bool same) {
    edges->push_back({e, v, s, old_w, new_w});
    if (same) ++same_round;
  }
};

// Event-driven form of the round loop. A node's effective out-weights are
// fixed at its activation (PT amplifies each edge at most once, when its
// source activates), so the contributions of the nodes activated in round t
// are pushed into the accumulators of their inactive targets right after
// round t. accum[v] then equals I_v as computed from the live weights, and
// only the touched targets can change activation status in round t + 1.
template <class Thresholds, class Recorder>
void diffuse(const DirectedGraph& graph, const EdgeWeightMap& weights, bool pressure, double alpha,
             const Thresholds& theta, std::span<const NodeId> seeds, Workspace& ws,
             Recorder& recorder) {
  const std::size_t n = graph.node_count();
  ws.frontier_.clear();
  for (NodeId s : seeds) {
    if (s >= n) throw std::out_of_range("seed " + std::to_string(s) + " is not a node");
    if (ws.round_[s] != DiffusionOutcome::kInactive) continue;
    ws.round_[s] = 0;
    ws.activated_.push_back(s);
    ws.frontier_.push_back(s);
  }

  std::int32_t t = 0;
  while (!ws.frontier_.empty()) {
    if (++ws.epoch_ == 0) {
      std::fill(ws.stamp_.begin(), ws.stamp_.end(), 0);
      ws.epoch_ = 1;
    }
    ws.candidates_.clear();
    for (NodeId v : ws.frontier_) {
      const bool adjust = pressure && ws.round_[v] > 0;
      const double boost = adjust ? alpha * ws.influence_[v] : 0.0;
      EdgeId e = graph.out_edge_begin(v);
      for (NodeId s : graph.out_neighbors(v)) {
        const EdgeId edge = e++;
        const std::int32_t rs = ws.round_[s];
        if (rs != DiffusionOutcome::kInactive && rs < t) continue;
        double w = weights.base(edge);
        if (adjust) {
          const double raised = std::min(1.0, w + boost);
          if constexpr (Recorder::kEnabled) {
            if (alpha > 0.0) recorder.amplified(edge, v, s, w, raised, rs == t);
          }
          w = raised;
        }
        if (rs == t) continue;
        // Zero-weight edges can list a node twice; reset() tolerates that.
        if (ws.accum_[s] == 0.0) ws.touched_.push_back(s);
        ws.accum_[s] += w;
        if (ws.stamp_[s] != ws.epoch_) {
          ws.stamp_[s] = ws.epoch_;
          ws.candidates_.push_back(s);
        }
      }
    }

    ++t;
    ws.next_.clear();
    for (NodeId s : ws.candidates_) {
      if (ws.accum_[s] >= theta[s]) ws.next_.push_back(s);
    }
    for (NodeId s : ws.next_) {
      ws.round_[s] = t;
      ws.influence_[s] = ws.accum_[s];
      ws.activated_.push_back(s);
    }
    std::swap(ws.frontier_, ws.next_);
    if (!ws.frontier_.empty()) ws.rounds_ = t;
  }
}

DiffusionOutcome run_recorded(const DirectedGraph& graph, const EdgeWeightMap& weights,
                              const ModelSpec& model, const ThresholdAssignment& thresholds,
                              std::span<const NodeId> seeds) {
  model.validate();
  if (thresholds.size() != graph.node_count()) {
    throw std::invalid_argument("threshold assignment size does not match node count");
  }
  if (weights.size() != graph.edge_count()) {
    throw std::invalid_argument("weight map size does not match edge count");
  }
  Workspace ws(graph.node_count());
  DiffusionOutcome out;
  EdgeRecorder recorder{&out.amplified_edges};
  ws.rounds_ = 0;
  diffuse(graph, weights, model.is_pt(), model.alpha, thresholds, seeds, ws, recorder);

  out.activation_order = ws.activated_;
  out.activation_round = ws.round_;
  out.received_influence.assign(graph.node_count(), std::nullopt);
  for (NodeId v : ws.activated_) {
    if (ws.round_[v] > 0) out.received_influence[v] = ws.influence_[v];
  }
  out.same_round_adjustments = recorder.same_round;
  out.rounds = ws.rounds_;
  return out;
}

}  // namespace

DiffusionOutcome run_lt(const DirectedGraph& graph, const EdgeWeightMap& weights,
                        const ThresholdAssignment& thresholds, std::span<const NodeId> seeds) {
  return run_recorded(graph, weights, ModelSpec::lt(), thresholds, seeds);
}

DiffusionOutcome run_pt(const DirectedGraph& graph, const EdgeWeightMap& weights,
                        const ThresholdAssignment& thresholds, std::span<const NodeId> seeds,
                        double alpha) {
  return run_recorded(graph, weights, ModelSpec::pt(alpha), thresholds, seeds);
}

DiffusionOutcome run_diffusion(const DirectedGraph& graph, const EdgeWeightMap& weights,
                               const ModelSpec& model, const ThresholdAssignment& thresholds,
                               std::span<const NodeId> seeds) {
  return run_recorded(graph, weights, model, thresholds, seeds);
}

SpreadEstimate estimate_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                               const ModelSpec& model, std::span<const NodeId> seeds,
                               std::int64_t num_sims, std::uint64_t rng_seed, unsigned workers) {
  model.validate();
  if (num_sims < 1) throw std::invalid_argument("num_sims must be >= 1");
  if (weights.size() != graph.edge_count()) {
    throw std::invalid_argument("weight map size does not match edge count");
  }
  const auto sims = static_cast<std::size_t>(num_sims);
  std::vector<std::uint32_t> counts(sims);
  parallel_for(sims, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    Workspace ws(graph.node_count());
    NoRecorder recorder;
    for (std::size_t i = begin; i < end; ++i) {
      const HashedThresholds theta{simulation_seed(rng_seed, i)};
      diffuse(graph, weights, model.is_pt(), model.alpha, theta, seeds, ws, recorder);
      counts[i] = static_cast<std::uint32_t>(ws.activated_.size());
      ws.reset();
    }
  });

  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  const double mean = static_cast<double>(total) / static_cast<double>(sims);
  double ss = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d;
  }
  const double std_error =
      sims > 1 ? std::sqrt(ss / static_cast<double>(sims - 1) / static_cast<double>(sims)) : 0.0;
  return {mean, std_error, num_sims, rng_seed};
}

SpreadEstimate estimate_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                               const ModelSpec& model, std::span<const NodeId> seeds,
                               const ThresholdAssignment& thresholds) {
  const auto outcome = run_diffusion(graph, weights, model, thresholds, seeds);
  return {static_cast<double>(outcome.active_count()), 0.0, 1, 0};
}

std::string write_trace_csv(const DirectedGraph& graph, const DiffusionOutcome& outcome) {
  std::string out = "record,node,round,influence,target,old_weight,new_weight\n";
  for (NodeId v : outcome.activation_order) {
    out += "activation,";
    out += std::to_string(graph.original_id(v));
    out += ',';
    out += std::to_string(outcome.activation_round[v]);
    out += ',';
    if (outcome.received_influence[v]) out += format_double(*outcome.received_influence[v]);
    out += ",,,\n";
  }
  for (const auto& a : outcome.amplified_edges) {
    out += "amplification,";
    out += std::to_string(graph.original_id(a.source));
    out += ',';
    out += std::to_string(outcome.activation_round[a.source]);
    out += ',';
    out += format_double(*outcome.received_influence[a.source]);
    out += ',';
    out += std::to_string(graph.original_id(a.target));
    out += ',';
    out += format_double(a.old_weight);
    out += ',';
    out += format_double(a.new_weight);
    out += '\n';
  }
  return out;
}

}  // namespace ptim
