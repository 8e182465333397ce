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

// Linear Threshold (LT) and Pressure Threshold (PT) diffusion.
//
// Both models run in synchronous rounds. In round t every inactive node v
// sums the effective weights of its active in-neighbors, I_v, and activates
// if I_v >= theta_v. PT adds an adjustment phase: each node v activated in
// round t (seeds excluded) raises the weight of every out-edge (v, s) whose
// target was not active before round t to min(1, w_vs + alpha * I_v). The
// raised weights are what v contributes from round t + 1 on. With alpha = 0
// the adjustment is the identity and PT reduces to LT.

#ifndef PTIM_DIFFUSION_H_
#define PTIM_DIFFUSION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptim/graph.h"
#include "ptim/random.h"

namespace ptim {

// One threshold per node, each in (0, 1].
class ThresholdAssignment {
 public:
  ThresholdAssignment() = default;
  explicit ThresholdAssignment(std::vector<double> theta);

  double operator[](NodeId v) const { return theta_[v]; }
  std::size_t size() const { return theta_.size(); }
  std::span<const double> values() const { return theta_; }

 private:
  std::vector<double> theta_;
};

// Thresholds computed on demand as a hash of (seed, node). Produces exactly
// the values sample_thresholds(graph, seed) would.
struct HashedThresholds {
  std::uint64_t seed = 0;
  double operator[](NodeId v) const { return unit_open_closed(derive_seed(seed, v)); }
};

ThresholdAssignment sample_thresholds(const DirectedGraph& graph, std::uint64_t rng_seed);

enum class ModelKind { kLinearThreshold, kPressureThreshold };

struct ModelSpec {
  ModelKind kind = ModelKind::kLinearThreshold;
  double alpha = 0.0;  // PT only

  static ModelSpec lt() { return {ModelKind::kLinearThreshold, 0.0}; }
  static ModelSpec pt(double alpha) { return {ModelKind::kPressureThreshold, alpha}; }

  bool is_pt() const { return kind == ModelKind::kPressureThreshold; }
  // Throws std::invalid_argument for a negative or non-finite alpha.
  void validate() const;
  // "lt" or "pt:<alpha>".
  std::string label() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Parses "lt", "pt:<alpha>" or "pt" (alpha taken from `default_alpha`).
ModelSpec parse_model(std::string_view text, double default_alpha = 0.0);

struct AmplifiedEdge {
  EdgeId edge;
  NodeId source;
  NodeId target;
  double old_weight;
  double new_weight;
};

struct DiffusionOutcome {
  static constexpr std::int32_t kInactive = -1;

  // Activation order: seeds first, then round by round.
  std::vector<NodeId> activation_order;
  // Per node; 0 for seeds, kInactive if never activated.
  std::vector<std::int32_t> activation_round;
  // Per node; I_v for non-seed activated nodes, unset otherwise.
  std::vector<std::optional<double>> received_influence;
  // PT with alpha > 0 only. Targets activated in the same round as the
  // source are adjusted too (they are not yet in the previously-active set);
  // same_round_adjustments counts those.
  std::vector<AmplifiedEdge> amplified_edges;
  std::size_t same_round_adjustments = 0;
  std::int32_t rounds = 0;

  bool is_active(NodeId v) const { return activation_round[v] != kInactive; }
  std::size_t active_count() const { return activation_order.size(); }
  // Sorted ascending.
  std::vector<NodeId> active_set() const;
  WeightOverlay overlay() const;
};

DiffusionOutcome run_lt(const DirectedGraph& graph, const EdgeWeightMap& weights,
                        const ThresholdAssignment& thresholds, std::span<const NodeId> seeds);

// Throws std::invalid_argument if alpha < 0.
DiffusionOutcome run_pt(const DirectedGraph& graph, const EdgeWeightMap& weights,
                        const ThresholdAssignment& thresholds, std::span<const NodeId> seeds,
                        double alpha);

DiffusionOutcome run_diffusion(const DirectedGraph& graph, const EdgeWeightMap& weights,
                               const ModelSpec& model, const ThresholdAssignment& thresholds,
                               std::span<const NodeId> seeds);

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t num_sims = 0;
  std::uint64_t rng_seed = 0;
};

// Threshold seed of simulation `index` in a run keyed by `rng_seed`.
constexpr std::uint64_t simulation_seed(std::uint64_t rng_seed, std::uint64_t index) {
  return derive_seed(rng_seed, index);
}

// Monte-Carlo estimate of the expected active-set size. Simulation i uses
// thresholds sample_thresholds(graph, simulation_seed(rng_seed, i)). The
// result is bit-identical for any worker count.
SpreadEstimate estimate_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                               const ModelSpec& model, std::span<const NodeId> seeds,
                               std::int64_t num_sims, std::uint64_t rng_seed,
                               unsigned workers = 1);

// Deterministic spread under fixed thresholds: one simulation, zero error.
SpreadEstimate estimate_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                               const ModelSpec& model, std::span<const NodeId> seeds,
                               const ThresholdAssignment& thresholds);

// CSV trace with header
//   record,node,round,influence,target,old_weight,new_weight
// One "activation" row per active node (influence empty for seeds), then one
// "amplification" row per adjusted edge. Node ids are original ids.
std::string write_trace_csv(const DirectedGraph& graph, const DiffusionOutcome& outcome);

}  // namespace ptim

#endif  // PTIM_DIFFUSION_H_
