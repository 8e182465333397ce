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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "ptim/oracle.h"
#include "support.h"

namespace ptim {
namespace {

using F = CounterexampleFixture;

TEST(SampleThresholds, RangeAndDeterminism) {
  const auto g = DirectedGraph::from_edges(100000, {});
  const auto a = sample_thresholds(g, 11);
  const auto b = sample_thresholds(g, 11);
  const auto c = sample_thresholds(g, 12);
  double sum = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ASSERT_GT(a[v], 0.0);
    ASSERT_LE(a[v], 1.0);
    ASSERT_EQ(a[v], b[v]);
    sum += a[v];
  }
  EXPECT_NE(std::vector<double>(a.values().begin(), a.values().end()),
            std::vector<double>(c.values().begin(), c.values().end()));
  EXPECT_NEAR(sum / static_cast<double>(g.node_count()), 0.5, 0.005);
}

TEST(ThresholdAssignment, RejectsOutOfRange) {
  EXPECT_THROW(ThresholdAssignment({0.5, 0.0}), std::invalid_argument);
  EXPECT_THROW(ThresholdAssignment({1.0000001}), std::invalid_argument);
  EXPECT_NO_THROW(ThresholdAssignment({1.0, 1e-300}));
}

TEST(ModelSpec, ParseAndLabel) {
  EXPECT_EQ(parse_model("lt"), ModelSpec::lt());
  EXPECT_EQ(parse_model("pt:0.005"), ModelSpec::pt(0.005));
  EXPECT_EQ(parse_model("pt", 0.25), ModelSpec::pt(0.25));
  EXPECT_EQ(ModelSpec::pt(0.001).label(), "pt:0.001");
  EXPECT_THROW(parse_model("ic"), std::invalid_argument);
  EXPECT_THROW(parse_model("pt:-1"), std::invalid_argument);
  EXPECT_THROW(parse_model("pt:abc"), std::invalid_argument);
}

TEST(RunLt, CounterexampleStopsAtC) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{F::kA, F::kB};
  const auto out = run_lt(fx.graph, fx.weights, fx.thresholds, seeds);
  EXPECT_EQ(out.active_set(), (std::vector<NodeId>{F::kA, F::kB, F::kC}));
  EXPECT_EQ(out.activation_round[F::kC], 1);
  EXPECT_DOUBLE_EQ(*out.received_influence[F::kC], 0.8);
  EXPECT_FALSE(out.is_active(F::kD));
  EXPECT_TRUE(out.amplified_edges.empty());
  EXPECT_EQ(out.rounds, 1);
}

TEST(RunLt, EmptyAndFullSeedSets) {
  const auto fx = make_counterexample_fixture();
  const auto none = run_lt(fx.graph, fx.weights, fx.thresholds, {});
  EXPECT_TRUE(none.active_set().empty());
  EXPECT_EQ(none.rounds, 0);
  const std::vector<NodeId> all{0, 1, 2, 3};
  const auto full = run_lt(fx.graph, fx.weights, fx.thresholds, all);
  EXPECT_EQ(full.active_set(), all);
  EXPECT_EQ(full.rounds, 0);
  for (NodeId v : all) {
    EXPECT_EQ(full.activation_round[v], 0);
    EXPECT_FALSE(full.received_influence[v].has_value());
  }
}

TEST(RunLt, RejectsUnknownSeed) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{9};
  EXPECT_THROW(run_lt(fx.graph, fx.weights, fx.thresholds, seeds), std::out_of_range);
}

TEST(RunPt, CounterexampleAmplifiesCd) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{F::kA, F::kB};
  const auto out = run_pt(fx.graph, fx.weights, fx.thresholds, seeds, 1.0);
  EXPECT_EQ(out.active_count(), 4u);
  EXPECT_DOUBLE_EQ(*out.received_influence[F::kC], 0.8);
  ASSERT_EQ(out.amplified_edges.size(), 1u);
  const auto& a = out.amplified_edges[0];
  EXPECT_EQ(a.source, F::kC);
  EXPECT_EQ(a.target, F::kD);
  EXPECT_EQ(a.old_weight, 0.3);
  EXPECT_EQ(a.new_weight, 1.0);
  EXPECT_EQ(out.activation_round[F::kD], 2);
  EXPECT_EQ(*out.received_influence[F::kD], 1.0);
  EXPECT_EQ(out.overlay().effective(fx.weights, a.edge), 1.0);
  EXPECT_EQ(out.rounds, 2);
}

TEST(RunPt, SeededNodesDoNotAmplify) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{F::kA, F::kC};
  const auto out = run_pt(fx.graph, fx.weights, fx.thresholds, seeds, 1.0);
  EXPECT_EQ(out.active_set(), (std::vector<NodeId>{F::kA, F::kC}));
  EXPECT_TRUE(out.amplified_edges.empty());
}

TEST(RunPt, NegativeAlphaRejected) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{F::kA};
  EXPECT_THROW(run_pt(fx.graph, fx.weights, fx.thresholds, seeds, -0.1), std::invalid_argument);
  EXPECT_THROW(run_pt(fx.graph, fx.weights, fx.thresholds, seeds, std::nan("")),
               std::invalid_argument);
}

// Same-round targets: u and v both activate in round 1 and u -> v is
// adjusted, but v never re-evaluates, so the outcome is unaffected.
TEST(RunPt, SameRoundTargetsAreAdjustedButInert) {
  const auto g = DirectedGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
  const WeightAssignment w[] = {{0, 1, 1.0}, {0, 2, 0.5}, {1, 2, 0.5}};
  const auto weights = explicit_weights(g, w);
  const ThresholdAssignment theta({1.0, 0.2, 0.4});
  const std::vector<NodeId> seeds{0};
  const auto out = run_pt(g, weights, theta, seeds, 0.5);
  EXPECT_EQ(out.activation_round[1], 1);
  EXPECT_EQ(out.activation_round[2], 1);
  ASSERT_EQ(out.amplified_edges.size(), 1u);
  EXPECT_EQ(out.amplified_edges[0].new_weight, 1.0);
  EXPECT_EQ(out.same_round_adjustments, 1u);
  EXPECT_EQ(*out.received_influence[2], 0.5);
}

// Differential check against the literal round loop.
TEST(RunDiffusion, MatchesReferenceRoundLoop) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const auto inst = make_random_instance(rng(), 30);
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
      if (rng() % 5 == 0) seeds.push_back(v);
    }
    const double alphas[] = {0.0, 0.01, 0.3, 2.0};
    for (const auto& model : {ModelSpec::lt(), ModelSpec::pt(alphas[trial % 4])}) {
      const auto fast = run_diffusion(inst.graph, inst.weights, model, inst.thresholds, seeds);
      const auto ref = reference_diffusion(inst.graph, inst.weights, model, inst.thresholds, seeds);
      ASSERT_EQ(fast.activation_round, ref.activation_round) << "trial " << trial;
      ASSERT_EQ(fast.active_count(), ref.active_count);
      for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
        if (fast.activation_round[v] > 0) {
          EXPECT_NEAR(*fast.received_influence[v], ref.received_influence[v], 1e-12);
        }
      }
    }
  }
}

TEST(RunDiffusion, OutcomeInvariants) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = make_random_instance(rng(), 30);
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
      if (rng() % 4 == 0) seeds.push_back(v);
    }
    const double alpha = (trial % 3) * 0.2;
    const auto out = run_pt(inst.graph, inst.weights, inst.thresholds, seeds, alpha);
    const std::size_t n = inst.graph.node_count();
    EXPECT_LE(static_cast<std::size_t>(out.rounds), n);
    for (NodeId s : seeds) {
      EXPECT_EQ(out.activation_round[s], 0);
      EXPECT_FALSE(out.received_influence[s].has_value());
    }
    std::int32_t last_round = 0;
    std::size_t non_seed = 0;
    for (NodeId v : out.activation_order) {
      EXPECT_GE(out.activation_round[v], last_round);  // rounds appear in order
      last_round = out.activation_round[v];
      if (out.activation_round[v] > 0) {
        ++non_seed;
        EXPECT_GE(*out.received_influence[v], inst.thresholds[v]);
      }
    }
    EXPECT_EQ(last_round, out.rounds);
    if (alpha == 0.0 || non_seed == 0) EXPECT_TRUE(out.amplified_edges.empty());
    std::int64_t checked = 0;
    EXPECT_EQ(count_weight_cap_violations(inst.graph, inst.weights, out, alpha, &checked), 0);
  }
}

DirectedGraph two_nodes() { return DirectedGraph::from_edges(2, {{0, 1}}); }

TEST(EstimateSpread, IsolatedSeed) {
  const auto g = DirectedGraph::from_edges(1, {});
  const EdgeWeightMap w(g, {});
  const std::vector<NodeId> seeds{0};
  const auto est = estimate_spread(g, w, ModelSpec::lt(), seeds, 100, 3);
  EXPECT_EQ(est.mean, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.num_sims, 100);
}

TEST(EstimateSpread, UnitWeightAlwaysActivates) {
  const auto g = two_nodes();
  const EdgeWeightMap w(g, {1.0});
  const std::vector<NodeId> seeds{0};
  const auto est = estimate_spread(g, w, ModelSpec::pt(0.5), seeds, 1000, 3);
  EXPECT_EQ(est.mean, 2.0);
  EXPECT_EQ(est.std_error, 0.0);
}

// E[spread] = 1 + P(theta <= 0.5) = 1.5 analytically.
TEST(EstimateSpread, HalfWeightCalibration) {
  const auto g = two_nodes();
  const EdgeWeightMap w(g, {0.5});
  const std::vector<NodeId> seeds{0};
  const auto est = estimate_spread(g, w, ModelSpec::lt(), seeds, 10000, 17);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_NEAR(est.mean, 1.5, 3 * est.std_error);
}

// LT against the exact live-edge expectation on tiny graphs.
TEST(EstimateSpread, LtMatchesLiveEdgeEnumeration) {
  std::mt19937_64 rng(12);
  int compared = 0;
  for (int trial = 0; compared < 25 && trial < 500; ++trial) {
    const auto inst = make_random_instance(rng(), 6);
    std::size_t configurations = 1;
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) configurations *= inst.graph.in_degree(v) + 1;
    if (configurations > 20000 || inst.graph.edge_count() == 0) continue;
    const std::vector<NodeId> seeds{0};
    const double exact = testing::exact_lt_spread(inst.graph, inst.weights, seeds);
    const auto est = estimate_spread(inst.graph, inst.weights, ModelSpec::lt(), seeds, 20000, rng());
    EXPECT_NEAR(est.mean, exact, 4 * est.std_error + 1e-12) << "trial " << trial;
    ++compared;
  }
  EXPECT_EQ(compared, 25);
}

TEST(EstimateSpread, BitIdenticalAcrossWorkers) {
  const auto er = generate_erdos_renyi(500, 0.02, 3);
  const auto w = weighted_cascade(er.graph);
  const std::vector<NodeId> seeds{1, 2, 3, 50};
  const auto base = estimate_spread(er.graph, w, ModelSpec::pt(0.05), seeds, 301, 9, 1);
  for (unsigned workers : {2u, 4u, 8u, 64u}) {
    const auto other = estimate_spread(er.graph, w, ModelSpec::pt(0.05), seeds, 301, 9, workers);
    EXPECT_EQ(std::memcmp(&base.mean, &other.mean, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&base.std_error, &other.std_error, sizeof(double)), 0);
  }
}

TEST(EstimateSpread, SimulationUsesDerivedThresholds) {
  const auto er = generate_erdos_renyi(200, 0.04, 4);
  const auto w = weighted_cascade(er.graph);
  const std::vector<NodeId> seeds{0, 7};
  const auto model = ModelSpec::pt(0.1);
  double total = 0.0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto theta = sample_thresholds(er.graph, simulation_seed(123, i));
    total += static_cast<double>(run_diffusion(er.graph, w, model, theta, seeds).active_count());
  }
  EXPECT_EQ(estimate_spread(er.graph, w, model, seeds, 5, 123).mean, total / 5);
}

TEST(EstimateSpread, FixedThresholdsAndErrors) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{F::kA, F::kB};
  const auto est = estimate_spread(fx.graph, fx.weights, ModelSpec::pt(1.0), seeds, fx.thresholds);
  EXPECT_EQ(est.mean, 4.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_THROW(estimate_spread(fx.graph, fx.weights, ModelSpec::lt(), seeds, 0, 1),
               std::invalid_argument);
}

TEST(TraceCsv, CounterexampleTrace) {
  const auto fx = make_counterexample_fixture();
  const std::vector<NodeId> seeds{F::kA, F::kB};
  const auto out = run_pt(fx.graph, fx.weights, fx.thresholds, seeds, 1.0);
  EXPECT_EQ(write_trace_csv(fx.graph, out),
            "record,node,round,influence,target,old_weight,new_weight\n"
            "activation,0,0,,,,\n"
            "activation,1,0,,,,\n"
            "activation,2,1,0.8,,,\n"
            "activation,3,2,1,,,\n"
            "amplification,2,1,0.8,3,0.3,1\n");
}

}  // namespace
}  // namespace ptim
