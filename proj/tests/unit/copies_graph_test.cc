// Copyright 2026 The stochmatch Authors.
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

#include "stochmatch/copies_graph.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "stochmatch/algorithms.h"
#include "stochmatch/rng.h"
#include "test_util.h"

namespace stochmatch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(CopiesGraphTest, RejectsUnequalProbabilities) {
  const Instance inst({{{"u", 1.0}},
                       {"a", "b"},
                       {{"u", "a", 0.5}, {"u", "b", 0.25}}});
  EXPECT_THROW(CopiesGraphMatching(inst, {kInf}), std::invalid_argument);
}

TEST(CopiesGraphTest, CopyCountFollowsThreshold) {
  // theta = 0.6 with p = 0.25 admits levels 0, 0.25, 0.5.
  InstanceData d{{{"u", 1.0}}, {}, {}};
  for (int v = 0; v < 6; ++v) {
    d.online.push_back("v" + std::to_string(v));
    d.edges.push_back({"u", d.online.back(), 0.25});
  }
  const Instance inst(d);
  const std::vector<CopyMatch> m = CopiesGraphMatching(inst, {0.6});
  for (int v = 0; v < 3; ++v) EXPECT_EQ(m[v].level, v);
  EXPECT_EQ(m[3].u, -1);
  // A threshold exactly on a level boundary excludes that level.
  EXPECT_EQ(CopiesGraphMatching(inst, {0.5})[2].u, -1);
}

// The copies graph is an independent realization of Stochastic Balance.
TEST(CopiesGraphTest, AgreesWithStochasticBalanceProperty) {
  Rng rng(64);
  for (int trial = 0; trial < 300; ++trial) {
    const double p = trial % 2 ? 0.25 : 0.125;
    const Instance inst = testing::RandomInstance(rng, 8, 40, p, true, false);
    ThresholdVector th = SampleThresholds(
        inst.num_offline(), ThresholdLaw::kExponential, 0, 12, trial);
    for (double& t : th.theta) {
      if (rng.Uniform() < 0.2) t = kInf;
    }
    const RunTrace sb = RunStochasticBalance(inst, th);
    const std::vector<CopyMatch> cg = CopiesGraphMatching(inst, th.theta);
    std::vector<int> count(inst.num_offline(), 0);
    for (int v = 0; v < inst.num_online(); ++v) {
      ASSERT_EQ(cg[v].u, sb.arrivals[v].matched_to) << "trial " << trial;
      if (cg[v].u >= 0) EXPECT_EQ(cg[v].level, count[cg[v].u]++);
    }
  }
}

TEST(CopiesGraphTest, GoodSetRanksByLevelThenId) {
  const Instance inst({{{"b", 1.0}, {"a", 1.0}},
                       {"x", "y", "z"},
                       {{"a", "x", 0.5}, {"b", "y", 0.5}, {"a", "z", 0.5}}});
  const std::vector<CopyMatch> m = CopiesGraphMatching(inst, {kInf, kInf});
  // x -> (a, 0), y -> (b, 0), z -> (a, 1).
  EXPECT_EQ(GoodSet(inst, m, 0, 0), (std::set<int>{0}));
  EXPECT_EQ(GoodSet(inst, m, 1, 1), (std::set<int>{0, 1}));
  EXPECT_EQ(GoodSet(inst, m, 0, 2), (std::set<int>{0, 1, 2}));
}

TEST(CopiesGraphTest, StructuralBoundProperty) {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const double p = trial % 2 ? 0.25 : 0.125;
    const Instance inst = testing::RandomInstance(rng, 8, 40, p, true, false);
    std::vector<double> theta = SampleThresholds(
        inst.num_offline(), ThresholdLaw::kExponential, 0, 13, trial).theta;
    const int u = static_cast<int>(rng.Below(inst.num_offline()));
    std::vector<double> open = theta;
    open[u] = kInf;
    int level = 0;
    for (const CopyMatch& m : CopiesGraphMatching(inst, open)) level += m.u == u;
    if (level == 0) continue;
    theta[u] = level * p * rng.Uniform();
    const StructuralCheck c = CheckEqualStructural(inst, theta, u);
    EXPECT_DOUBLE_EQ(c.l_inf, level * p);
    EXPECT_TRUE(c.holds) << "trial " << trial << " diff "
                         << c.symmetric_difference << " bound " << c.bound;
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

}  // namespace
}  // namespace stochmatch
