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

#include "ptim/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ptim/random.h"

namespace ptim {

DirectedGraph DirectedGraph::from_edges(std::size_t node_count,
                                        std::vector<std::pair<NodeId, NodeId>> edges,
                                        std::vector<OriginalId> original_ids) {
  if (!original_ids.empty() && original_ids.size() != node_count) {
    throw std::invalid_argument("original id table size does not match node count");
  }
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw std::out_of_range("edge endpoint outside [0, node_count)");
    }
  }
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  DirectedGraph g;
  const std::size_t m = edges.size();
  g.out_offsets_.assign(node_count + 1, 0);
  g.in_offsets_.assign(node_count + 1, 0);
  g.out_targets_.resize(m);
  g.edge_sources_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    ++g.out_offsets_[edges[e].first + 1];
    ++g.in_offsets_[edges[e].second + 1];
    g.edge_sources_[e] = edges[e].first;
    g.out_targets_[e] = edges[e].second;
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    g.out_offsets_[v + 1] += g.out_offsets_[v];
    g.in_offsets_[v + 1] += g.in_offsets_[v];
  }
  // Edges are sorted by (source, target), so filling in-lists in edge order
  // leaves each in-list sorted by source.
  g.in_sources_.resize(m);
  g.in_edge_ids_.resize(m);
  std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t slot = cursor[edges[e].second]++;
    g.in_sources_[slot] = edges[e].first;
    g.in_edge_ids_[slot] = static_cast<EdgeId>(e);
  }

  if (original_ids.empty()) {
    original_ids.resize(node_count);
    for (std::size_t v = 0; v < node_count; ++v) original_ids[v] = static_cast<OriginalId>(v);
  }
  g.original_ids_ = std::move(original_ids);
  g.dense_ids_.reserve(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    if (!g.dense_ids_.emplace(g.original_ids_[v], static_cast<NodeId>(v)).second) {
      throw std::invalid_argument("duplicate original id " + std::to_string(g.original_ids_[v]));
    }
  }
  return g;
}

std::optional<EdgeId> DirectedGraph::find_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return std::nullopt;
  auto targets = out_neighbors(u);
  auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return std::nullopt;
  return out_edge_begin(u) + static_cast<EdgeId>(it - targets.begin());
}

std::optional<NodeId> DirectedGraph::dense_id(OriginalId original) const {
  auto it = dense_ids_.find(original);
  if (it == dense_ids_.end()) return std::nullopt;
  return it->second;
}

EdgeWeightMap::EdgeWeightMap(const DirectedGraph& graph, std::vector<double> base)
    : base_(std::move(base)) {
  if (base_.size() != graph.edge_count()) {
    throw std::invalid_argument("weight vector size does not match edge count");
  }
  for (std::size_t e = 0; e < base_.size(); ++e) {
    if (!(base_[e] >= 0.0 && base_[e] <= 1.0)) {
      throw std::invalid_argument("edge weight outside [0, 1]: " + std::to_string(base_[e]));
    }
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (incoming_sum(graph, v) > 1.0 + 1e-9) {
      throw std::invalid_argument("incoming weight sum exceeds 1 at node " +
                                  std::to_string(graph.original_id(v)));
    }
  }
}

double EdgeWeightMap::incoming_sum(const DirectedGraph& graph, NodeId v) const {
  double sum = 0.0;
  for (EdgeId e : graph.in_edge_ids(v)) sum += base_[e];
  return sum;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "edge-list-directed" || name == "directed") return GraphFormat::kEdgeListDirected;
  if (name == "edge-list-undirected" || name == "undirected") {
    return GraphFormat::kEdgeListUndirected;
  }
  if (name == "csv" || name == "csv-first-two-columns") return GraphFormat::kCsv;
  throw std::invalid_argument("unknown graph format '" + std::string(name) + "'");
}

std::string_view to_string(GraphFormat format) {
  switch (format) {
    case GraphFormat::kEdgeListDirected:
      return "edge-list-directed";
    case GraphFormat::kEdgeListUndirected:
      return "edge-list-undirected";
    case GraphFormat::kCsv:
      return "csv";
  }
  return "unknown";
}

GraphSource GraphSource::from_text(std::string text, GraphFormat format) {
  return GraphSource{format, std::move(text)};
}

GraphSource GraphSource::from_file(const std::string& path, GraphFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return GraphSource{format, buffer.str()};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_tokens(std::string_view line, bool commas_only) {
  std::vector<std::string_view> tokens;
  if (commas_only) {
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      tokens.push_back(trim(line.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return tokens;
  }
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

OriginalId parse_id(std::string_view token, std::size_t line_no) {
  OriginalId value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line_no, "malformed node id '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

DirectedGraph load_edge_list(const GraphSource& source, LoadStats* stats) {
  LoadStats local;
  std::unordered_map<OriginalId, NodeId> remap;
  std::vector<OriginalId> originals;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](OriginalId id) {
    auto [it, inserted] = remap.emplace(id, static_cast<NodeId>(originals.size()));
    if (inserted) originals.push_back(id);
    return it->second;
  };

  const bool csv = source.format == GraphFormat::kCsv;
  const bool undirected = source.format == GraphFormat::kEdgeListUndirected;
  std::string_view text = source.text;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    ++local.lines_read;

    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = split_tokens(body, csv);
    if (tokens.size() < 2) throw ParseError(line_no, "expected two node ids");
    if (!csv && tokens.size() > 2) {
      throw ParseError(line_no, "expected exactly two node ids, found " +
                                    std::to_string(tokens.size()) + " tokens");
    }
    const NodeId u = intern(parse_id(tokens[0], line_no));
    const NodeId v = intern(parse_id(tokens[1], line_no));
    ++local.edges_read;
    if (u == v) {
      ++local.self_loops_dropped;
      continue;
    }
    edges.emplace_back(u, v);
    if (undirected) edges.emplace_back(v, u);
  }

  const std::size_t emitted = edges.size();
  DirectedGraph graph = DirectedGraph::from_edges(originals.size(), std::move(edges), originals);
  if (graph.edge_count() == 0) throw std::runtime_error("edge list contains no edges");
  local.duplicates_collapsed = emitted - graph.edge_count();
  if (stats != nullptr) *stats = local;
  return graph;
}

std::string write_edge_list(const DirectedGraph& graph) {
  std::string out;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    for (NodeId v : graph.out_neighbors(u)) {
      out += std::to_string(u);
      out += ' ';
      out += std::to_string(v);
      out += '\n';
    }
  }
  return out;
}

EdgeWeightMap weighted_cascade(const DirectedGraph& graph) {
  std::vector<double> base(graph.edge_count());
  for (EdgeId e = 0; e < base.size(); ++e) {
    base[e] = 1.0 / static_cast<double>(graph.in_degree(graph.edge_target(e)));
  }
  return EdgeWeightMap(graph, std::move(base));
}

EdgeWeightMap explicit_weights(const DirectedGraph& graph,
                               std::span<const WeightAssignment> assignments) {
  std::vector<double> base(graph.edge_count(), 0.0);
  for (const auto& a : assignments) {
    auto e = graph.find_edge(a.source, a.target);
    if (!e) {
      throw std::invalid_argument("no edge " + std::to_string(a.source) + " -> " +
                                  std::to_string(a.target));
    }
    base[*e] = a.weight;
  }
  return EdgeWeightMap(graph, std::move(base));
}

ErdosRenyiGraph generate_erdos_renyi(std::size_t n, double p, std::uint64_t rng_seed) {
  if (n < 1) throw std::invalid_argument("Erdos-Renyi graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability outside [0, 1]");
  std::mt19937_64 rng(mix64(rng_seed));
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t pairs = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (unit_closed_open(rng()) < p) {
        edges.emplace_back(u, v);
        edges.emplace_back(v, u);
        ++pairs;
      }
    }
  }
  return {DirectedGraph::from_edges(n, std::move(edges)), pairs};
}

}  // namespace ptim
