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

// Experiment runners: LT/PT seed timelines, budget curves and alpha sweeps,
// plus the smoothing and cubic-fit post-processing they use.

#ifndef PTIM_EXPERIMENTS_H_
#define PTIM_EXPERIMENTS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptim/diffusion.h"
#include "ptim/graph.h"

namespace ptim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DatasetUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  // Edge-list file; ignored for Erdos-Renyi datasets.
  std::string path;
  GraphFormat format = GraphFormat::kEdgeListDirected;
  bool erdos_renyi = false;
  std::size_t er_n = 5000;
  double er_p = 0.005;
  std::uint64_t er_seed = 1;
};

// Key-value configuration; see parse_experiment_config for the keys.
struct ExperimentConfig {
  std::string name = "network";
  DatasetSpec dataset;
  std::vector<ModelSpec> models;
  std::vector<std::int64_t> budgets;
  std::int64_t num_sims = 1000;
  std::uint64_t rng_seed = 0;
  // In (0, 1]. Scales simulation counts, the largest budget and the number
  // of alpha grid points; 1 is full scale.
  double scale_factor = 1.0;
  std::string output_dir;  // empty: nothing is written
  unsigned workers = 1;
  bool shared_sample_pool = true;

  double alpha_min = 0.0001;
  double alpha_max = 0.1;
  double alpha_step = 0.0001;
  std::vector<OriginalId> sweep_seeds;  // empty: chosen by CELF under LT
  std::int64_t seed_set_size = 10;
  std::int64_t selection_sims = 200;
  std::int64_t smoothing_window = 9;

  void validate() const;
  std::int64_t effective_sims() const;
  std::vector<std::int64_t> effective_budgets() const;
  std::vector<double> alpha_grid() const;
};

// Lines of `key = value`; '#' starts a comment. Keys: name, dataset (a path
// or "erdos-renyi"), format, er_n, er_p, er_seed, models (e.g.
// "lt, pt:0.001"), budgets (e.g. "1-10, 20"), sims, rng_seed,
// scale_factor, output_dir, workers, shared_sample_pool, alpha_min,
// alpha_max, alpha_step, seeds, seed_set_size, selection_sims, window.
// Relative dataset paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(std::string_view text, const std::string& base_dir = "");
ExperimentConfig load_experiment_config(const std::string& path);

struct LoadedDataset {
  DirectedGraph graph;
  EdgeWeightMap weights;  // weighted cascade
  // "key: value" lines describing how the graph was obtained.
  std::string metadata;
};

// Throws DatasetUnavailable if the file is missing.
LoadedDataset load_dataset(const DatasetSpec& spec);

struct SeedTimeline {
  std::string first_model;
  std::string second_model;
  std::vector<OriginalId> first;
  std::vector<OriginalId> second;
  std::vector<bool> position_match;
  std::size_t overlap = 0;  // |first ∩ second|
};

// CELF under models[0] and models[1] at the largest budget. Writes
// exp1_<name>.csv (position,lt_node,pt_node,match) and a metadata file.
SeedTimeline exp1_seed_timeline(const ExperimentConfig& config);
SeedTimeline exp1_seed_timeline(const ExperimentConfig& config, const LoadedDataset& data);

struct CurvePoint {
  std::int64_t k = 0;
  double mean_influence = 0;
  double std_error = 0;
  std::string model;
};

// Per model: CELF at the largest budget, then every budget prefix is
// re-estimated on an independent sample stream. Writes one
// exp2_<name>_<model>.csv (k,mean,stderr) per model.
std::vector<std::vector<CurvePoint>> exp2_budget_curves(const ExperimentConfig& config);
std::vector<std::vector<CurvePoint>> exp2_budget_curves(const ExperimentConfig& config,
                                                        const LoadedDataset& data);

struct AlphaSweep {
  std::vector<OriginalId> seeds;
  std::vector<double> alpha;
  std::vector<double> raw;
  std::vector<double> raw_std_error;
  std::vector<double> smoothed;
  std::array<double, 4> fit{};  // highest degree first, fitted to raw
};

// PT spread of a fixed seed set over the alpha grid. Writes exp3_<name>.csv
// (alpha,raw,smoothed), exp3_<name>_fit.csv and a metadata file.
AlphaSweep exp3_alpha_sweep(const ExperimentConfig& config);
AlphaSweep exp3_alpha_sweep(const ExperimentConfig& config, const LoadedDataset& data);

// Centered moving average; the window is truncated at the ends.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

// Least-squares cubic, coefficients highest degree first. Needs at least
// four distinct x values.
std::array<double, 4> cubic_fit(std::span<const double> x, std::span<const double> y);

}  // namespace ptim

#endif  // PTIM_EXPERIMENTS_H_
