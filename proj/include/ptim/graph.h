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

// Directed graphs in compressed adjacency form, edge-list ingestion, edge
// weight initialization and Erdos-Renyi generation.

#ifndef PTIM_GRAPH_H_
#define PTIM_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ptim {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using OriginalId = std::int64_t;

// Immutable directed graph. Node ids are dense in [0, node_count). Out-edges
// of each node are sorted by target and numbered contiguously, so EdgeId
// order is (source, target) lexicographic. Each node also carries its
// in-edges (sorted by source) together with the EdgeId of each.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // Builds a graph from dense-id edges. Self-loops are dropped and parallel
  // edges collapsed. `original_ids`, if non-empty, must have node_count
  // entries and maps dense ids back to the ids used in the input.
  static DirectedGraph from_edges(
      std::size_t node_count, std::vector<std::pair<NodeId, NodeId>> edges,
      std::vector<OriginalId> original_ids = {});

  std::size_t node_count() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t edge_count() const { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  // EdgeId of the first out-edge of v; the i-th entry of out_neighbors(v) is
  // edge out_edge_begin(v) + i.
  EdgeId out_edge_begin(NodeId v) const { return static_cast<EdgeId>(out_offsets_[v]); }

  std::span<const NodeId> in_neighbors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::span<const EdgeId> in_edge_ids(NodeId v) const {
    return {in_edge_ids_.data() + in_offsets_[v], in_edge_ids_.data() + in_offsets_[v + 1]};
  }

  std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  NodeId edge_source(EdgeId e) const { return edge_sources_[e]; }
  NodeId edge_target(EdgeId e) const { return out_targets_[e]; }
  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;

  OriginalId original_id(NodeId v) const { return original_ids_[v]; }
  std::optional<NodeId> dense_id(OriginalId original) const;
  std::span<const OriginalId> original_ids() const { return original_ids_; }

 private:
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<NodeId> edge_sources_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<EdgeId> in_edge_ids_;
  std::vector<OriginalId> original_ids_;
  std::unordered_map<OriginalId, NodeId> dense_ids_;
};

// Base influence weight per directed edge, indexed by EdgeId. Immutable once
// built; diffusion runs keep amplified weights in a separate WeightOverlay.
class EdgeWeightMap {
 public:
  EdgeWeightMap() = default;
  // Validates every weight in [0, 1] and every incoming sum <= 1 (1e-9 slack).
  EdgeWeightMap(const DirectedGraph& graph, std::vector<double> base);

  double base(EdgeId e) const { return base_[e]; }
  std::size_t size() const { return base_.size(); }
  std::span<const double> values() const { return base_; }

  // Sum of base weights over the in-edges of v.
  double incoming_sum(const DirectedGraph& graph, NodeId v) const;

 private:
  std::vector<double> base_;
};

// Sparse per-run overlay of amplified edge weights over an EdgeWeightMap.
class WeightOverlay {
 public:
  void set(EdgeId e, double weight) { amplified_[e] = weight; }
  double effective(const EdgeWeightMap& weights, EdgeId e) const {
    auto it = amplified_.find(e);
    return it == amplified_.end() ? weights.base(e) : it->second;
  }
  std::size_t size() const { return amplified_.size(); }
  bool empty() const { return amplified_.empty(); }

 private:
  std::unordered_map<EdgeId, double> amplified_;
};

enum class GraphFormat { kEdgeListDirected, kEdgeListUndirected, kCsv };

// Accepts "edge-list-directed" (alias "directed"), "edge-list-undirected"
// (alias "undirected") and "csv" (alias "csv-first-two-columns").
GraphFormat parse_graph_format(std::string_view name);
std::string_view to_string(GraphFormat format);

struct GraphSource {
  GraphFormat format = GraphFormat::kEdgeListDirected;
  std::string text;

  static GraphSource from_text(std::string text, GraphFormat format);
  // Throws std::runtime_error if the file cannot be read.
  static GraphSource from_file(const std::string& path, GraphFormat format);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadStats {
  std::size_t lines_read = 0;
  std::size_t edges_read = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

// Parses an edge list. Ids are remapped densely in first-appearance order;
// the original ids stay available through DirectedGraph::original_id.
DirectedGraph load_edge_list(const GraphSource& source, LoadStats* stats = nullptr);

// Directed edge list with dense ids, sorted by (u, v).
std::string write_edge_list(const DirectedGraph& graph);

// w(u, v) = 1 / in_degree(v).
EdgeWeightMap weighted_cascade(const DirectedGraph& graph);

struct WeightAssignment {
  NodeId source;
  NodeId target;
  double weight;
};

// Sets the listed edges to the given weights; every other edge gets 0.
EdgeWeightMap explicit_weights(const DirectedGraph& graph,
                               std::span<const WeightAssignment> assignments);

struct ErdosRenyiGraph {
  DirectedGraph graph;
  std::size_t undirected_edge_count = 0;
};

// G(n, p) over unordered pairs; each sampled pair becomes two directed edges.
ErdosRenyiGraph generate_erdos_renyi(std::size_t n, double p, std::uint64_t rng_seed);

}  // namespace ptim

#endif  // PTIM_GRAPH_H_
