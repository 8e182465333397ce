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

#include "ptim/experiments.h"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ptim/format.h"
#include "ptim/influence_max.h"
#include "ptim/random.h"

namespace ptim {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kEvaluationStreamTag = 0xe7a1;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("bad boolean '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

std::vector<std::int64_t> parse_budgets(std::string_view value) {
  std::vector<std::int64_t> out;
  for (auto item : split_list(value)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(parse_number<std::int64_t>("budgets", item));
      continue;
    }
    const auto lo = parse_number<std::int64_t>("budgets", trim(item.substr(0, dash)));
    const auto hi = parse_number<std::int64_t>("budgets", trim(item.substr(dash + 1)));
    if (hi < lo) throw ConfigError("empty budget range '" + std::string(item) + "'");
    for (auto k = lo; k <= hi; ++k) out.push_back(k);
  }
  return out;
}

void write_file(const std::string& dir, const std::string& name, const std::string& contents) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  const auto path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
}

std::string file_label(const ModelSpec& model) {
  return model.is_pt() ? "pt_a" + format_double(model.alpha) : "lt";
}

EstimatorConfig estimator_for(const ExperimentConfig& config, std::int64_t sims) {
  EstimatorConfig est;
  est.num_sims = sims;
  est.rng_seed = config.rng_seed;
  est.shared_sample_pool = config.shared_sample_pool;
  est.workers = config.workers;
  return est;
}

std::string run_metadata(const ExperimentConfig& config, const LoadedDataset& data) {
  std::ostringstream out;
  out << "name: " << config.name << "\n"
      << data.metadata << "sims: " << config.effective_sims() << "\n"
      << "rng_seed: " << config.rng_seed << "\n"
      << "scale_factor: " << format_double(config.scale_factor) << "\n"
      << "shared_sample_pool: " << (config.shared_sample_pool ? "true" : "false") << "\n";
  return out.str();
}

std::vector<OriginalId> to_original(const DirectedGraph& graph, std::span<const NodeId> nodes) {
  std::vector<OriginalId> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) out.push_back(graph.original_id(v));
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (num_sims < 1) throw ConfigError("sims must be >= 1");
  if (!(scale_factor > 0.0 && scale_factor <= 1.0)) throw ConfigError("scale_factor must be in (0, 1]");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < 1) throw ConfigError("budgets must be positive");
    if (i > 0 && budgets[i] <= budgets[i - 1]) throw ConfigError("budgets must be increasing");
  }
  for (const auto& m : models) {
    if (!std::isfinite(m.alpha) || m.alpha < 0.0) throw ConfigError("alpha values must be >= 0");
  }
  if (!(alpha_min >= 0.0 && alpha_max >= alpha_min && alpha_step > 0.0)) {
    throw ConfigError("alpha range must satisfy 0 <= alpha_min <= alpha_max, alpha_step > 0");
  }
  if (smoothing_window < 1 || smoothing_window % 2 == 0) throw ConfigError("window must be odd and >= 1");
  if (seed_set_size < 1) throw ConfigError("seed_set_size must be >= 1");
  if (selection_sims < 1) throw ConfigError("selection_sims must be >= 1");
}

std::int64_t ExperimentConfig::effective_sims() const {
  return std::max<std::int64_t>(1, std::llround(static_cast<double>(num_sims) * scale_factor));
}

std::vector<std::int64_t> ExperimentConfig::effective_budgets() const {
  if (budgets.empty()) return {};
  const auto cap = std::max<std::int64_t>(
      1, std::llround(static_cast<double>(budgets.back()) * scale_factor));
  std::vector<std::int64_t> out;
  for (auto k : budgets) {
    if (k <= cap) out.push_back(k);
  }
  return out;
}

std::vector<double> ExperimentConfig::alpha_grid() const {
  const double step = alpha_step / scale_factor;
  const auto count =
      static_cast<std::int64_t>(std::floor((alpha_max - alpha_min) / step + 1e-9)) + 1;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = alpha_min + static_cast<double>(i) * step;
  }
  return grid;
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::string& base_dir) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }

    try {
      if (key == "name") {
        config.name = std::string(value);
      } else if (key == "dataset") {
        if (value == "erdos-renyi" || value == "er") {
          config.dataset.erdos_renyi = true;
        } else {
          fs::path p(value);
          if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
          config.dataset.path = p.string();
        }
      } else if (key == "format") {
        config.dataset.format = parse_graph_format(value);
      } else if (key == "er_n") {
        config.dataset.er_n = parse_number<std::size_t>(key, value);
      } else if (key == "er_p") {
        config.dataset.er_p = parse_number<double>(key, value);
      } else if (key == "er_seed") {
        config.dataset.er_seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "models") {
        for (auto item : split_list(value)) config.models.push_back(parse_model(item));
      } else if (key == "budgets") {
        config.budgets = parse_budgets(value);
      } else if (key == "sims") {
        config.num_sims = parse_number<std::int64_t>(key, value);
      } else if (key == "rng_seed") {
        config.rng_seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "scale_factor") {
        config.scale_factor = parse_number<double>(key, value);
      } else if (key == "output_dir") {
        fs::path p(value);
        if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
        config.output_dir = p.string();
      } else if (key == "workers") {
        config.workers = parse_number<unsigned>(key, value);
      } else if (key == "shared_sample_pool") {
        config.shared_sample_pool = parse_bool(key, value);
      } else if (key == "alpha_min") {
        config.alpha_min = parse_number<double>(key, value);
      } else if (key == "alpha_max") {
        config.alpha_max = parse_number<double>(key, value);
      } else if (key == "alpha_step") {
        config.alpha_step = parse_number<double>(key, value);
      } else if (key == "seeds") {
        for (auto item : split_list(value)) {
          config.sweep_seeds.push_back(parse_number<OriginalId>(key, item));
        }
      } else if (key == "seed_set_size") {
        config.seed_set_size = parse_number<std::int64_t>(key, value);
      } else if (key == "selection_sims") {
        config.selection_sims = parse_number<std::int64_t>(key, value);
      } else if (key == "window") {
        config.smoothing_window = parse_number<std::int64_t>(key, value);
      } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!config.dataset.erdos_renyi && config.dataset.path.empty()) {
    throw ConfigError("missing 'dataset'");
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), fs::path(path).parent_path().string());
}

LoadedDataset load_dataset(const DatasetSpec& spec) {
  LoadedDataset data;
  std::ostringstream meta;
  if (spec.erdos_renyi) {
    auto er = generate_erdos_renyi(spec.er_n, spec.er_p, spec.er_seed);
    data.graph = std::move(er.graph);
    meta << "dataset: erdos-renyi\n"
         << "er_n: " << spec.er_n << "\n"
         << "er_p: " << format_double(spec.er_p) << "\n"
         << "er_seed: " << spec.er_seed << "\n"
         << "undirected_edges: " << er.undirected_edge_count << "\n"
         << "edge_treatment: each sampled pair emitted in both directions\n";
  } else {
    if (!fs::exists(spec.path)) throw DatasetUnavailable("dataset not found: '" + spec.path + "'");
    data.graph = load_edge_list(GraphSource::from_file(spec.path, spec.format));
    meta << "dataset: " << spec.path << "\n"
         << "format: " << to_string(spec.format) << "\n";
  }
  meta << "nodes: " << data.graph.node_count() << "\n"
       << "directed_edges: " << data.graph.edge_count() << "\n"
       << "weights: weighted-cascade\n";
  data.weights = weighted_cascade(data.graph);
  data.metadata = meta.str();
  return data;
}

SeedTimeline exp1_seed_timeline(const ExperimentConfig& config) {
  return exp1_seed_timeline(config, load_dataset(config.dataset));
}

SeedTimeline exp1_seed_timeline(const ExperimentConfig& config, const LoadedDataset& data) {
  config.validate();
  if (config.models.size() < 2) throw ConfigError("exp1 needs two models");
  const auto budgets = config.effective_budgets();
  const std::int64_t k = budgets.empty() ? 20 : budgets.back();
  const auto est = estimator_for(config, config.effective_sims());

  SeedTimeline timeline;
  timeline.first_model = config.models[0].label();
  timeline.second_model = config.models[1].label();
  const auto first = celf(data.graph, data.weights, config.models[0], k, est);
  const auto second = celf(data.graph, data.weights, config.models[1], k, est);
  timeline.first = to_original(data.graph, first.seeds_in_order);
  timeline.second = to_original(data.graph, second.seeds_in_order);

  const std::set<OriginalId> first_set(timeline.first.begin(), timeline.first.end());
  std::string csv = "position,lt_node,pt_node,match\n";
  for (std::size_t i = 0; i < timeline.first.size(); ++i) {
    const bool match = timeline.first[i] == timeline.second[i];
    timeline.position_match.push_back(match);
    csv += std::to_string(i + 1) + "," + std::to_string(timeline.first[i]) + "," +
           std::to_string(timeline.second[i]) + "," + (match ? "1" : "0") + "\n";
  }
  for (auto v : timeline.second) timeline.overlap += first_set.count(v);

  std::ostringstream meta;
  meta << run_metadata(config, data) << "budget: " << k << "\n"
       << "first_model: " << timeline.first_model << "\n"
       << "second_model: " << timeline.second_model << "\n"
       << "overlap: " << timeline.overlap << "/" << timeline.first.size() << "\n";
  write_file(config.output_dir, "exp1_" + config.name + ".csv", csv);
  write_file(config.output_dir, "exp1_" + config.name + "_meta.txt", meta.str());
  return timeline;
}

std::vector<std::vector<CurvePoint>> exp2_budget_curves(const ExperimentConfig& config) {
  return exp2_budget_curves(config, load_dataset(config.dataset));
}

std::vector<std::vector<CurvePoint>> exp2_budget_curves(const ExperimentConfig& config,
                                                        const LoadedDataset& data) {
  config.validate();
  if (config.models.empty()) throw ConfigError("exp2 needs at least one model");
  const auto budgets = config.effective_budgets();
  if (budgets.empty()) throw ConfigError("exp2 needs budgets");
  const auto sims = config.effective_sims();
  const auto est = estimator_for(config, sims);
  const std::uint64_t eval_seed = derive_seed(config.rng_seed, kEvaluationStreamTag);

  std::vector<std::vector<CurvePoint>> curves;
  for (const auto& model : config.models) {
    const auto selected = celf(data.graph, data.weights, model, budgets.back(), est);
    std::vector<CurvePoint> curve;
    std::string csv = "k,mean,stderr\n";
    for (auto k : budgets) {
      const auto prefix_len = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                    selected.seeds_in_order.size());
      const std::span<const NodeId> prefix(selected.seeds_in_order.data(), prefix_len);
      const auto s = estimate_spread(data.graph, data.weights, model, prefix, sims, eval_seed,
                                     config.workers);
      curve.push_back({k, s.mean, s.std_error, model.label()});
      csv += std::to_string(k) + "," + format_double(s.mean) + "," + format_double(s.std_error) + "\n";
    }
    write_file(config.output_dir, "exp2_" + config.name + "_" + file_label(model) + ".csv", csv);
    curves.push_back(std::move(curve));
  }
  std::ostringstream meta;
  meta << run_metadata(config, data) << "models:";
  for (const auto& m : config.models) meta << " " << m.label();
  meta << "\nevaluation: prefixes re-estimated on an independent sample stream\n";
  write_file(config.output_dir, "exp2_" + config.name + "_meta.txt", meta.str());
  return curves;
}

AlphaSweep exp3_alpha_sweep(const ExperimentConfig& config) {
  return exp3_alpha_sweep(config, load_dataset(config.dataset));
}

AlphaSweep exp3_alpha_sweep(const ExperimentConfig& config, const LoadedDataset& data) {
  config.validate();
  AlphaSweep sweep;
  std::vector<NodeId> seeds;
  std::string seed_origin;
  if (!config.sweep_seeds.empty()) {
    for (auto id : config.sweep_seeds) {
      auto v = data.graph.dense_id(id);
      if (!v) throw ConfigError("seed " + std::to_string(id) + " is not in the dataset");
      seeds.push_back(*v);
    }
    seed_origin = "config";
  } else {
    auto est = estimator_for(config, config.selection_sims);
    seeds = celf(data.graph, data.weights, ModelSpec::lt(), config.seed_set_size, est).seeds_in_order;
    seed_origin = "celf-lt, " + std::to_string(config.selection_sims) + " sims";
  }
  sweep.seeds = to_original(data.graph, seeds);
  sweep.alpha = config.alpha_grid();

  const auto sims = config.effective_sims();
  for (double alpha : sweep.alpha) {
    const auto s = estimate_spread(data.graph, data.weights, ModelSpec::pt(alpha), seeds, sims,
                                   config.rng_seed, config.workers);
    sweep.raw.push_back(s.mean);
    sweep.raw_std_error.push_back(s.std_error);
  }
  sweep.smoothed = moving_average(sweep.raw, static_cast<std::size_t>(config.smoothing_window));
  if (sweep.alpha.size() >= 4) sweep.fit = cubic_fit(sweep.alpha, sweep.raw);

  std::string csv = "alpha,raw,smoothed\n";
  for (std::size_t i = 0; i < sweep.alpha.size(); ++i) {
    csv += format_double(sweep.alpha[i]) + "," + format_double(sweep.raw[i]) + "," +
           format_double(sweep.smoothed[i]) + "\n";
  }
  std::string fit_csv = "degree,coefficient\n";
  for (int i = 0; i < 4; ++i) fit_csv += std::to_string(3 - i) + "," + format_double(sweep.fit[i]) + "\n";

  std::ostringstream meta;
  meta << run_metadata(config, data) << "seeds:";
  for (auto id : sweep.seeds) meta << " " << id;
  meta << "\nseed_origin: " << seed_origin << "\n"
       << "alpha_points: " << sweep.alpha.size() << "\n"
       << "window: " << config.smoothing_window << "\n"
       << "fit_input: raw\n";
  write_file(config.output_dir, "exp3_" + config.name + ".csv", csv);
  write_file(config.output_dir, "exp3_" + config.name + "_fit.csv", fit_csv);
  write_file(config.output_dir, "exp3_" + config.name + "_meta.txt", meta.str());
  return sweep;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw std::invalid_argument("window must be odd and >= 1");
  const std::size_t n = series.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    // Averaging offsets from the center point keeps constant runs exact.
    double offset = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) offset += series[j] - series[i];
    out[i] = series[i] + offset / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::array<double, 4> cubic_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 4) throw std::invalid_argument("cubic fit needs at least 4 distinct x values");

  // Solve in t = (x - center) / half_width in [-1, 1], then expand back.
  const double lo = *distinct.begin();
  const double hi = *distinct.rbegin();
  const double center = 0.5 * (lo + hi);
  const double half_width = 0.5 * (hi - lo);
  const Eigen::Index m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(m, 4);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = (x[i] - center) / half_width;
    design(i, 0) = t * t * t;
    design(i, 1) = t * t;
    design(i, 2) = t;
    design(i, 3) = 1.0;
    rhs(i) = y[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 4) throw std::invalid_argument("cubic fit design matrix is rank deficient");
  const Eigen::Vector4d b = qr.solve(rhs);

  // t = q x + r
  const double q = 1.0 / half_width;
  const double r = -center / half_width;
  return {
      b(0) * q * q * q,
      3.0 * b(0) * q * q * r + b(1) * q * q,
      3.0 * b(0) * q * r * r + 2.0 * b(1) * q * r + b(2) * q,
      b(0) * r * r * r + b(1) * r * r + b(2) * r + b(3),
  };
}

}  // namespace ptim
