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

// Independent checks on the diffusion engine: the four-node instance on
// which PT spread is not submodular, randomized property suites with coupled
// thresholds, and a reference diffusion that follows the round loop
// literally (full weight array, per-round recomputation of every I_v).

#ifndef PTIM_ORACLE_H_
#define PTIM_ORACLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptim/diffusion.h"
#include "ptim/graph.h"

namespace ptim {

// a -> c (0.4), b -> c (0.4), c -> d (0.3); theta_c = 0.8, theta_d = 0.4,
// alpha = 1. a and b only ever appear as seeds; their thresholds are 1.
struct CounterexampleFixture {
  static constexpr NodeId kA = 0;
  static constexpr NodeId kB = 1;
  static constexpr NodeId kC = 2;
  static constexpr NodeId kD = 3;

  DirectedGraph graph;
  EdgeWeightMap weights;
  ThresholdAssignment thresholds;
  double alpha = 1.0;
};

CounterexampleFixture make_counterexample_fixture();

struct CounterexampleSpreads {
  double sigma_s = 0;    // {a}
  double sigma_s_c = 0;  // {a, c}
  double sigma_t = 0;    // {a, b}
  double sigma_t_c = 0;  // {a, b, c}

  double gain_s() const { return sigma_s_c - sigma_s; }
  double gain_t() const { return sigma_t_c - sigma_t; }
};

// Runs PT on the fixture and returns the four spreads. Throws
// std::logic_error unless they are exactly (1, 2, 4, 3).
CounterexampleSpreads verify_counterexample();

struct PropertyWitness {
  std::int64_t trial = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t threshold_seed = 0;
  std::string detail;
};

struct PropertyReport {
  std::string suite;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  // Amplified-edge records inspected and those outside [base, 1] or not
  // equal to min(1, base + alpha * I_source).
  std::int64_t weight_checks = 0;
  std::int64_t weight_violations = 0;
  std::optional<PropertyWitness> first_violation_witness;

  bool ok() const { return violations == 0 && weight_violations == 0; }
  // "<suite>: trials: N, violations: V, weight_checks: C, weight_violations: W"
  // plus the first witness, if any.
  std::string summary_line() const;
};

// Small random instance: 1..max_nodes nodes, random density, weights either
// weighted-cascade or random with incoming sums in [0.3, 1].
struct RandomInstance {
  DirectedGraph graph;
  EdgeWeightMap weights;
  ThresholdAssignment thresholds;
  std::uint64_t instance_seed = 0;
  std::uint64_t threshold_seed = 0;
};

RandomInstance make_random_instance(std::uint64_t seed, std::size_t max_nodes = 30);

// Number of amplified-edge records of a PT outcome that break the weight cap
// invariant; `checked` receives the number of records inspected.
std::int64_t count_weight_cap_violations(const DirectedGraph& graph, const EdgeWeightMap& weights,
                                         const DiffusionOutcome& outcome, double alpha,
                                         std::int64_t* checked = nullptr);

// PT with alpha = 0 against LT: identical active sets and activation rounds.
PropertyReport check_alpha_zero_equivalence(std::int64_t trials, std::uint64_t rng_seed,
                                            unsigned workers = 1);

// A subset of B, shared thresholds: counts trials where active(A) is not a
// subset of active(B). PT with alpha > 0 can produce such trials.
PropertyReport check_monotonicity(const ModelSpec& model, std::int64_t trials,
                                  std::uint64_t rng_seed, unsigned workers = 1);

// Shared thresholds and seeds, random alpha > 0: active(LT) subset of active(PT).
PropertyReport check_lt_dominated_by_pt(std::int64_t trials, std::uint64_t rng_seed,
                                        unsigned workers = 1);

struct ReferenceOutcome {
  std::vector<std::int32_t> activation_round;  // DiffusionOutcome::kInactive if never
  std::vector<double> received_influence;      // 0 for seeds and inactive nodes
  std::size_t active_count = 0;
};

// Literal round loop: each round recomputes I_v for every inactive node from
// the current weight array, then applies the adjustment phase in place.
ReferenceOutcome reference_diffusion(const DirectedGraph& graph, const EdgeWeightMap& weights,
                                     const ModelSpec& model, const ThresholdAssignment& thresholds,
                                     std::span<const NodeId> seeds);

struct ReferenceSpread {
  SpreadEstimate estimate;
  bool converged = false;  // false if the simulation cap was hit first
};

// Monte-Carlo on reference_diffusion with thresholds from a sequential
// mt19937_64 stream, until std_error <= precision_target (at least 100
// simulations, at most 10^6). With fixed thresholds a single run is exact.
ReferenceSpread reference_spread(const DirectedGraph& graph, const EdgeWeightMap& weights,
                                 const ModelSpec& model, std::span<const NodeId> seeds,
                                 double precision_target, std::uint64_t rng_seed = 0,
                                 const ThresholdAssignment* fixed_thresholds = nullptr);

}  // namespace ptim

#endif  // PTIM_ORACLE_H_
