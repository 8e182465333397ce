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

// Budgeted seed selection: CELF lazy greedy and a plain greedy reference.
//
// Under PT with alpha > 0 the spread function is monotone but not
// submodular, so neither routine carries the (1 - 1/e) guarantee there; they
// are greedy heuristics. CELF matches plain greedy whenever the estimated
// spread function is submodular.

#ifndef PTIM_INFLUENCE_MAX_H_
#define PTIM_INFLUENCE_MAX_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptim/diffusion.h"
#include "ptim/graph.h"

namespace ptim {

struct EstimatorConfig {
  std::int64_t num_sims = 1000;
  std::uint64_t rng_seed = 0;
  // Common random numbers: every evaluation reuses the same per-simulation
  // threshold seeds. When false, evaluation j draws from stream j.
  bool shared_sample_pool = true;
  unsigned workers = 1;
  // Deterministic mode: every evaluation is a single run on these thresholds.
  std::optional<ThresholdAssignment> fixed_thresholds;

  void validate() const;
};

struct CelfResult {
  std::vector<NodeId> seeds_in_order;
  // Gain of step i, clamped at 0.
  std::vector<double> marginal_gain;
  // Unclamped estimate difference for step i, kept for diagnostics.
  std::vector<double> raw_gain;
  // Running total of marginal_gain.
  std::vector<double> cumulative_spread;
  // Spread evaluations performed up to and including step i.
  std::vector<std::int64_t> evaluations_so_far;
  std::int64_t evaluations = 0;
};

// Throws std::invalid_argument for k < 0 or an invalid config.
CelfResult celf(const DirectedGraph& graph, const EdgeWeightMap& weights, const ModelSpec& model,
                std::int64_t k, const EstimatorConfig& est);

CelfResult greedy_naive(const DirectedGraph& graph, const EdgeWeightMap& weights,
                        const ModelSpec& model, std::int64_t k, const EstimatorConfig& est);

// One spread evaluation as seen by the selectors; evaluation_index only
// matters when the config does not share its sample pool.
double evaluate_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                       const ModelSpec& model, std::span<const NodeId> seeds,
                       const EstimatorConfig& est, std::int64_t evaluation_index);

// CSV: step,node_id,marginal_gain,cumulative_spread,evaluations_so_far with
// original node ids.
std::string write_celf_csv(const DirectedGraph& graph, const CelfResult& result);

}  // namespace ptim

#endif  // PTIM_INFLUENCE_MAX_H_
