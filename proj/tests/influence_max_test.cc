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


#include "ptim/influence_max.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ptim/oracle.h"
#include "support.h"

namespace ptim {
namespace {

using F = CounterexampleFixture;

EstimatorConfig fixed(const CounterexampleFixture& fx) {
  EstimatorConfig est;
  est.fixed_thresholds = fx.thresholds;
  return est;
}

TEST(Celf, CounterexampleBudgetTwo) {
  const auto fx = make_counterexample_fixture();
  const auto model = ModelSpec::pt(fx.alpha);
  for (const auto& r : {celf(fx.graph, fx.weights, model, 2, fixed(fx)),
                        greedy_naive(fx.graph, fx.weights, model, 2, fixed(fx))}) {
    EXPECT_EQ(r.seeds_in_order, (std::vector<NodeId>{F::kA, F::kB}));
    EXPECT_EQ(r.cumulative_spread, (std::vector<double>{1.0, 4.0}));
    EXPECT_EQ(r.marginal_gain, (std::vector<double>{1.0, 3.0}));
  }
}

TEST(Celf, TiesGoToLowestId) {
  const auto fx = make_counterexample_fixture();
  const auto r = celf(fx.graph, fx.weights, ModelSpec::lt(), 1, fixed(fx));
  EXPECT_EQ(r.seeds_in_order, (std::vector<NodeId>{F::kA}));
  EXPECT_EQ(r.evaluations, 4);
}

TEST(Celf, BudgetEdgeCases) {
  const auto fx = make_counterexample_fixture();
  const auto model = ModelSpec::lt();
  const auto zero = celf(fx.graph, fx.weights, model, 0, fixed(fx));
  EXPECT_TRUE(zero.seeds_in_order.empty());
  EXPECT_EQ(zero.evaluations, 0);
  EXPECT_THROW(celf(fx.graph, fx.weights, model, -1, fixed(fx)), std::invalid_argument);
  EXPECT_THROW(greedy_naive(fx.graph, fx.weights, model, -1, fixed(fx)), std::invalid_argument);

  const auto all = celf(fx.graph, fx.weights, model, 10, fixed(fx));
  auto sorted = all.seeds_in_order;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(all.cumulative_spread.back(), 4.0);
}

TEST(Celf, RejectsBadConfig) {
  const auto fx = make_counterexample_fixture();
  EstimatorConfig est;
  est.num_sims = 0;
  EXPECT_THROW(celf(fx.graph, fx.weights, ModelSpec::lt(), 1, est), std::invalid_argument);
  est = EstimatorConfig{};
  est.fixed_thresholds = ThresholdAssignment({0.5});
  EXPECT_THROW(celf(fx.graph, fx.weights, ModelSpec::lt(), 1, est), std::invalid_argument);
}

TEST(Celf, ResultShapeAndDeterminism) {
  const auto er = generate_erdos_renyi(300, 0.02, 8);
  const auto w = weighted_cascade(er.graph);
  EstimatorConfig est;
  est.num_sims = 50;
  est.rng_seed = 4;
  const auto a = celf(er.graph, w, ModelSpec::pt(0.05), 5, est);
  est.workers = 4;
  const auto b = celf(er.graph, w, ModelSpec::pt(0.05), 5, est);
  EXPECT_EQ(a.seeds_in_order, b.seeds_in_order);
  EXPECT_EQ(a.cumulative_spread, b.cumulative_spread);
  EXPECT_EQ(write_celf_csv(er.graph, a), write_celf_csv(er.graph, b));
  ASSERT_EQ(a.seeds_in_order.size(), 5u);
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_GE(a.marginal_gain[i], 0.0);
    EXPECT_EQ(a.marginal_gain[i], std::max(0.0, a.raw_gain[i]));
    total += a.marginal_gain[i];
    EXPECT_DOUBLE_EQ(a.cumulative_spread[i], total);
    if (i > 0) EXPECT_GE(a.evaluations_so_far[i], a.evaluations_so_far[i - 1]);
  }
  EXPECT_EQ(a.evaluations_so_far.back(), a.evaluations);
  EXPECT_GE(a.evaluations, static_cast<std::int64_t>(er.graph.node_count()));
}

TEST(Celf, FreshSamplesDifferButStayReproducible) {
  const auto er = generate_erdos_renyi(200, 0.03, 2);
  const auto w = weighted_cascade(er.graph);
  EstimatorConfig est;
  est.num_sims = 40;
  est.shared_sample_pool = false;
  const std::vector<NodeId> seeds{3};
  EXPECT_NE(evaluate_spread(er.graph, w, ModelSpec::lt(), seeds, est, 0),
            evaluate_spread(er.graph, w, ModelSpec::lt(), seeds, est, 1));
  est.shared_sample_pool = true;
  EXPECT_EQ(evaluate_spread(er.graph, w, ModelSpec::lt(), seeds, est, 0),
            evaluate_spread(er.graph, w, ModelSpec::lt(), seeds, est, 1));
  est.shared_sample_pool = false;
  const auto a = celf(er.graph, w, ModelSpec::lt(), 3, est);
  const auto b = celf(er.graph, w, ModelSpec::lt(), 3, est);
  EXPECT_EQ(a.seeds_in_order, b.seeds_in_order);
  EXPECT_EQ(a.raw_gain, b.raw_gain);
}

// When the estimated spread is submodular, lazy evaluation is exact.
TEST(Celf, MatchesGreedyOnSubmodularEstimates) {
  std::mt19937_64 rng(2024);
  int verified = 0;
  for (int attempt = 0; attempt < 400 && verified < 60; ++attempt) {
    const auto inst = make_random_instance(rng(), 8);
    if (inst.graph.node_count() < 3) continue;
    EstimatorConfig est;
    est.num_sims = 200;
    est.rng_seed = rng();
    const auto f = testing::subset_spreads(inst.graph, inst.weights, ModelSpec::lt(), est);
    if (!testing::is_submodular(f, inst.graph.node_count())) continue;
    ++verified;
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(inst.graph.node_count()); ++k) {
      const auto lazy = celf(inst.graph, inst.weights, ModelSpec::lt(), k, est);
      const auto full = greedy_naive(inst.graph, inst.weights, ModelSpec::lt(), k, est);
      ASSERT_EQ(lazy.seeds_in_order, full.seeds_in_order) << "attempt " << attempt << " k " << k;
      EXPECT_EQ(lazy.cumulative_spread, full.cumulative_spread);
      EXPECT_LE(lazy.evaluations, full.evaluations);
    }
  }
  EXPECT_GE(verified, 50);
}

TEST(Celf, CsvLayout) {
  const auto fx = make_counterexample_fixture();
  const auto r = celf(fx.graph, fx.weights, ModelSpec::pt(1.0), 2, fixed(fx));
  const auto csv = write_celf_csv(fx.graph, r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "step,node_id,marginal_gain,cumulative_spread,evaluations_so_far");
  EXPECT_NE(csv.find("\n1,0,1,1,"), std::string::npos);
  EXPECT_NE(csv.find("\n2,1,3,4,"), std::string::npos);
}

}  // namespace
}  // namespace ptim
