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


// Shared oracles for the test binaries.

#ifndef PTIM_TESTS_SUPPORT_H_
#define PTIM_TESTS_SUPPORT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "ptim/influence_max.h"

namespace ptim::testing {

// Spread estimate of every subset of a small graph, indexed by bitmask.
inline std::vector<double> subset_spreads(const DirectedGraph& g, const EdgeWeightMap& w,
                                          const ModelSpec& model, const EstimatorConfig& est) {
  const std::size_t n = g.node_count();
  std::vector<double> f(std::size_t{1} << n);
  std::vector<NodeId> seeds;
  for (std::size_t mask = 0; mask < f.size(); ++mask) {
    seeds.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (mask >> v & 1) seeds.push_back(v);
    }
    f[mask] = evaluate_spread(g, w, model, seeds, est, 0);
  }
  return f;
}

// Exhaustive check of f(S+u) + f(S+v) >= f(S+u+v) + f(S) over every S and
// pair u, v outside S. That local form is equivalent to full submodularity.
inline bool is_submodular(const std::vector<double>& f, std::size_t n) {
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t u = 0; u < n; ++u) {
      if (s >> u & 1) continue;
      for (std::size_t v = u + 1; v < n; ++v) {
        if (s >> v & 1) continue;
        const std::size_t su = s | std::size_t{1} << u;
        const std::size_t sv = s | std::size_t{1} << v;
        if (f[su] + f[sv] < f[su | sv] + f[s]) return false;
      }
    }
  }
  return true;
}

inline bool is_monotone(const std::vector<double>& f, std::size_t n) {
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t u = 0; u < n; ++u) {
      if (f[s | std::size_t{1} << u] < f[s]) return false;
    }
  }
  return true;
}

// Exact LT spread by enumerating live-edge graphs: node v keeps in-edge
// (u, v) with probability w_uv and none with the remaining mass. Only for
// tiny graphs.
inline double exact_lt_spread(const DirectedGraph& g, const EdgeWeightMap& w,
                              const std::vector<NodeId>& seeds) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> choice(n, 0);  // 0: no live edge, i: i-th in-edge
  double total = 0.0;
  while (true) {
    double p = 1.0;
    std::vector<std::vector<NodeId>> live_out(n);
    for (NodeId v = 0; v < n; ++v) {
      const auto in = g.in_neighbors(v);
      const auto ids = g.in_edge_ids(v);
      if (choice[v] == 0) {
        p *= 1.0 - w.incoming_sum(g, v);
      } else {
        p *= w.base(ids[choice[v] - 1]);
        live_out[in[choice[v] - 1]].push_back(v);
      }
    }
    if (p > 0) {
      std::vector<bool> seen(n, false);
      std::vector<NodeId> stack(seeds.begin(), seeds.end());
      for (NodeId s : seeds) seen[s] = true;
      std::size_t count = seeds.size();
      while (!stack.empty()) {
        const NodeId x = stack.back();
        stack.pop_back();
        for (NodeId y : live_out[x]) {
          if (!seen[y]) {
            seen[y] = true;
            ++count;
            stack.push_back(y);
          }
        }
      }
      total += p * static_cast<double>(count);
    }
    std::size_t v = 0;
    while (v < n && ++choice[v] > g.in_degree(v)) choice[v++] = 0;
    if (v == n) break;
  }
  return total;
}

}  // namespace ptim::testing

#endif  // PTIM_TESTS_SUPPORT_H_
