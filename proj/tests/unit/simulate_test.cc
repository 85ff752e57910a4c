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

#include "stochmatch/simulate.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "stochmatch/errors.h"
#include "stochmatch/rng.h"
#include "test_util.h"

namespace stochmatch {
namespace {

namespace fs = std::filesystem;

const PotentialTable& Unequal() {
  static const PotentialTable f = PotentialTable::UnequalClosed();
  return f;
}

TEST(RngTest, StreamsAreDeterministicAndDistinct) {
  EXPECT_EQ(DeriveSeed(1, 2, Purpose::kThresholds),
            DeriveSeed(1, 2, Purpose::kThresholds));
  std::set<uint64_t> seen;
  for (uint64_t t = 0; t < 100; ++t) {
    for (Purpose p : {Purpose::kThresholds, Purpose::kRounding,
                      Purpose::kRewards, Purpose::kCoupling}) {
      seen.insert(DeriveSeed(7, t, p));
    }
  }
  EXPECT_EQ(seen.size(), 400u);
  Rng a(5, 0, Purpose::kAudit), b(5, 0, Purpose::kAudit);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, BelowIsUniform) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.Below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(ThresholdsTest, ExponentialMean) {
  const ThresholdVector th =
      SampleThresholds(100000, ThresholdLaw::kExponential, 0, 11);
  double sum = 0.0;
  for (double t : th.theta) sum += t;
  EXPECT_NEAR(sum / 1e5, 1.0, 0.02);
}

TEST(ThresholdsTest, DeltaEnhancedFloor) {
  const ThresholdVector th =
      SampleThresholds(10000, ThresholdLaw::kDeltaEnhanced, 0.1, 4);
  EXPECT_GE(*std::min_element(th.theta.begin(), th.theta.end()), 0.1);
  EXPECT_THROW(SampleThresholds(3, ThresholdLaw::kDeltaEnhanced, -1, 4),
               std::invalid_argument);
}

TEST(ThresholdsTest, GeometricCellsHaveGeometricMass) {
  // Mass of cell [(i - 1) p, i p) is p (1 - p)^(i - 1).
  const double p = 0.2;
  const int n = 200000;
  const ThresholdVector th = SampleThresholds(n, ThresholdLaw::kGeometric, p, 8);
  std::vector<int> cells(6, 0);
  for (double t : th.theta) {
    const int i = static_cast<int>(std::floor(t / p));
    if (i < 6) ++cells[i];
  }
  for (int i = 0; i < 6; ++i) {
    const double expect = p * std::pow(1 - p, i);
    EXPECT_NEAR(cells[i] / static_cast<double>(n), expect, 0.004) << i;
  }
  EXPECT_THROW(SampleThresholds(3, ThresholdLaw::kGeometric, 0.0, 4),
               std::invalid_argument);
}

TEST(ThresholdsTest, GeometricApproachesExponentialKs) {
  ThresholdVector th =
      SampleThresholds(100000, ThresholdLaw::kGeometric, 1e-3, 21);
  std::sort(th.theta.begin(), th.theta.end());
  double ks = 0.0;
  const double n = static_cast<double>(th.theta.size());
  for (size_t i = 0; i < th.theta.size(); ++i) {
    const double cdf = -std::expm1(-th.theta[i]);
    ks = std::max({ks, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(ThresholdsTest, LawNamesRoundTrip) {
  for (ThresholdLaw law : {ThresholdLaw::kExponential, ThresholdLaw::kGeometric,
                           ThresholdLaw::kDeltaEnhanced}) {
    EXPECT_EQ(ParseThresholdLaw(ToString(law)), law);
  }
  EXPECT_THROW(ParseThresholdLaw("pareto"), std::invalid_argument);
}

TEST(MonteCarloTest, SummarizeMatchesDefinition) {
  const MonteCarloEstimate e = Summarize({1.0, 2.0, 3.0, 4.0}, 9);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.se, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(e.trials, 4);
  EXPECT_EQ(e.seed, 9u);
  EXPECT_EQ(Summarize({3.0}).se, 0.0);
}

TEST(MonteCarloTest, ParallelForVisitsEveryTrialOnce) {
  std::vector<std::atomic<int>> hits(1000);
  ParallelFor(1000, 4, [&](int64_t t) { ++hits[t]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(ParallelFor(10, 3,
                           [](int64_t t) {
                             if (t == 5) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

TEST(EstimateRatioTest, SingleEdgeGivesOneMinusInverseE) {
  const Instance inst({{{"u", 1.0}}, {"v"}, {{"u", "v", 1.0}}});
  ExperimentConfig config;
  config.algorithm = Algorithm::kGreedy;
  config.trials = 20000;
  config.seed = 3;
  const RatioEstimate est = EstimateRatio(inst, config, Unequal());
  EXPECT_NEAR(est.opt, 1.0, 1e-12);
  EXPECT_NEAR(est.ratio.mean, 1.0 - std::exp(-1.0), 3.0 * est.ratio.se);
}

TEST(EstimateRatioTest, DeterministicAcrossWorkerCounts) {
  const Instance inst = GenUpperTriangular(5, 0.1);
  ExperimentConfig config;
  config.trials = 300;
  config.seed = 42;
  config.workers = 1;
  const RatioEstimate a = EstimateRatio(inst, config, Unequal());
  config.workers = 4;
  const RatioEstimate b = EstimateRatio(inst, config, Unequal());
  EXPECT_EQ(a.objectives, b.objectives);
  EXPECT_EQ(a.ratio.mean, b.ratio.mean);
  EXPECT_EQ(a.ratio.se, b.ratio.se);
  config.seed = 43;
  EXPECT_NE(EstimateRatio(inst, config, Unequal()).ratio.mean, a.ratio.mean);
}

TEST(EstimateRatioTest, EveryModelRuns) {
  const Instance inst = GenUpperTriangular(4, 0.1);
  for (auto [algo, model] :
       std::vector<std::pair<Algorithm, Model>>{
           {Algorithm::kStochasticBalance, Model::kBudget},
           {Algorithm::kWeighted, Model::kRewards},
           {Algorithm::kFractional, Model::kRounded},
           {Algorithm::kFractional, Model::kBudget}}) {
    ExperimentConfig config;
    config.algorithm = algo;
    config.model = model;
    config.trials = 50;
    const RatioEstimate est = EstimateRatio(inst, config, Unequal());
    EXPECT_GT(est.ratio.mean, 0.3) << ToString(model);
    EXPECT_LE(est.ratio.mean, 1.0 + 1e-9);
    EXPECT_LE(est.max_identity_error, 1e-12);
  }
}

TEST(CouplingTest, SingleCertainEdge) {
  const Instance inst({{{"u", 1.0}}, {"v"}, {{"u", "v", 1.0}}});
  for (uint64_t t = 0; t < 200; ++t) {
    const CoupledRun c =
        CoupleRewardToBudget(inst, Algorithm::kGreedy, Unequal(), 5, t);
    EXPECT_EQ(c.draws_issued, 1);
    EXPECT_GE(c.thresholds.theta[0], 0.0);
    EXPECT_LT(c.thresholds.theta[0], 1.0);
    EXPECT_TRUE(c.decisions_match);
  }
}

TEST(CouplingTest, ReplayMirrorsRewardsRunProperty) {
  Rng rng(70);
  for (int trial = 0; trial < 200; ++trial) {
    const bool equal = trial % 2 == 0;
    const Instance inst = testing::RandomInstance(rng, 6, 30, 0.5, equal, true);
    const Algorithm algo = equal ? Algorithm::kStochasticBalance
                                 : Algorithm::kGreedy;
    const CoupledRun c = CoupleRewardToBudget(inst, algo, Unequal(), 17, trial);
    EXPECT_TRUE(c.decisions_match) << trial;
    const RunTrace& r = c.rewards.trace;
    int successes = 0;
    double capped = 0.0;
    for (int u = 0; u < inst.num_offline(); ++u) {
      const double theta = c.thresholds.theta[u];
      if (r.successful[u]) {
        ++successes;
        const double l = c.rewards.load_before_success[u];
        EXPECT_GE(theta, l);
        EXPECT_LT(theta, l + c.rewards.success_p[u]);
      } else {
        // No draw: the vertex is never capped in the replay.
        EXPECT_TRUE(std::isinf(theta));
      }
      EXPECT_NEAR(c.budget.loads[u], r.loads[u], 1e-12);
      capped += inst.weight(u) * std::min(r.loads[u], theta);
    }
    EXPECT_EQ(c.draws_issued, successes);
    EXPECT_NEAR(c.budget_objective, capped, 1e-9);
  }
}

// One vertex facing k attempts of probability p. Rewards: success with
// probability 1 - (1 - p)^k. Replay: success at attempt j pins theta to
// Exp(1) conditioned on [(j - 1) p, j p), whose mean is
// (j - 1) p + 1 - p e^-p / (1 - e^-p); a vertex that never succeeds keeps
// its whole load k p.
TEST(CouplingTest, SingleVertexExpectationsMatchClosedForm) {
  const int k = 12;
  const double p = 0.1;
  InstanceData d{{{"u", 1.0}}, {}, {}};
  for (int v = 0; v < k; ++v) {
    d.online.push_back("v" + std::to_string(v));
    d.edges.push_back({"u", d.online.back(), p});
  }
  const Instance inst(d);
  const double shift = 1.0 - p * std::exp(-p) / -std::expm1(-p);
  double budget = std::pow(1 - p, k) * k * p;
  for (int j = 1; j <= k; ++j) {
    budget += p * std::pow(1 - p, j - 1) * ((j - 1) * p + shift);
  }
  std::vector<double> rewards, budgets;
  for (uint64_t t = 0; t < 20000; ++t) {
    const CoupledRun c = CoupleRewardToBudget(
        inst, Algorithm::kStochasticBalance, Unequal(), 23, t);
    rewards.push_back(c.reward_objective);
    budgets.push_back(c.budget_objective);
  }
  const MonteCarloEstimate r = Summarize(rewards), b = Summarize(budgets);
  EXPECT_NEAR(r.mean, 1.0 - std::pow(1 - p, k), 3.0 * r.se);
  EXPECT_NEAR(b.mean, budget, 3.0 * b.se);
}

TEST(RoundingTest, DeterministicAssignmentNeverFails) {
  InstanceData d{{{"u", 1.0}}, {}, {}};
  for (int v = 0; v < 300; ++v) {
    d.online.push_back("v" + std::to_string(v));
    d.edges.push_back({"u", d.online.back(), 0.01});
  }
  const Instance inst(d);
  for (uint64_t t = 0; t < 50; ++t) {
    const RoundingRun r =
        RoundFractionalToIntegral(inst, Unequal(), 0.5, 1, t, true);
    EXPECT_FALSE(r.failed);
    // Only the arrival that exhausts the fractional budget is split.
    EXPECT_LE(r.max_drift[0], 0.01 + 1e-12);
    EXPECT_NEAR(r.integral_objective, std::min(3.0, r.theta[0]), 1e-9);
  }
}

TEST(RoundingTest, DriftMatchesHistoryAndFailureFlag) {
  const Instance inst = GenUpperTriangular(6, 0.1);
  const double delta = 0.15;
  for (uint64_t t = 0; t < 100; ++t) {
    const RoundingRun r =
        RoundFractionalToIntegral(inst, Unequal(), delta, 2, t, true);
    double worst = 0.0;
    for (int u = 0; u < inst.num_offline(); ++u) {
      std::vector<double> a, b;
      for (size_t i = 0; i < r.fractional_history.size(); ++i) {
        a.push_back(r.fractional_history[i][u]);
        b.push_back(r.integral_history[i][u]);
      }
      const double drift = MaxDriftCheck(a, b);
      EXPECT_NEAR(drift, r.max_drift[u], 1e-12);
      worst = std::max(worst, drift);
    }
    EXPECT_EQ(r.failed, worst > delta);
    EXPECT_NEAR(r.fractional_objective, r.fractional.objective, 1e-9);
  }
  EXPECT_THROW(RoundFractionalToIntegral(inst, Unequal(), 0.0, 1), std::invalid_argument);
}

TEST(RoundingTest, HelperFormulas) {
  EXPECT_EQ(MaxDriftCheck({0.1, 0.2}, {0.1, 0.2}), 0.0);
  EXPECT_DOUBLE_EQ(MaxDriftCheck({0.5, 0.2}, {0.1, 0.3}), 0.4);
  EXPECT_THROW(MaxDriftCheck({0.1}, {}), std::invalid_argument);
  EXPECT_NEAR(MaximalBernsteinBound(0.5, 0.01, 0.02),
              2.0 * std::exp(-0.25 / 0.04), 1e-15);
  EXPECT_NEAR(DefaultDelta(0.001, 100), 3.0 * 0.1 * std::log(100.0), 1e-12);
  EXPECT_NEAR(DefaultDelta(0.001, 1, 1.0), 0.1 * std::log(2.0), 1e-12);
}

class ExperimentFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "stochmatch_experiment";
    fs::create_directories(dir_);
  }
  fs::path dir_;
};

TEST_F(ExperimentFileTest, ReadsKeysAndResolvesInstancePath) {
  std::ofstream(dir_ / "exp.json")
      << R"({"instance": "tri.json", "algorithm": "fractional",)"
      << R"( "potential": "unequal-closed", "law": "geometric",)"
      << R"( "law_param": 0.1, "trials": 12, "seed": 5, "delta": 0.3})";
  const ExperimentFile e = ReadExperimentFile((dir_ / "exp.json").string());
  EXPECT_EQ(fs::path(e.instance), dir_ / "tri.json");
  EXPECT_EQ(e.potential, "unequal-closed");
  EXPECT_EQ(e.config.algorithm, Algorithm::kFractional);
  EXPECT_EQ(e.config.law, ThresholdLaw::kGeometric);
  EXPECT_EQ(e.config.law_param, 0.1);
  EXPECT_EQ(e.config.trials, 12);
  EXPECT_EQ(e.config.seed, 5u);
  EXPECT_EQ(e.config.delta, 0.3);
}

TEST_F(ExperimentFileTest, MissingInstanceIsAParseError) {
  std::ofstream(dir_ / "bad.json") << R"({"algorithm": "sb"})";
  EXPECT_THROW(ReadExperimentFile((dir_ / "bad.json").string()), ParseError);
}

TEST_F(ExperimentFileTest, ResultsCsvLayout) {
  RatioEstimate est;
  est.opt = 2.0;
  est.objectives = {1.0, 1.5};
  est.objective = Summarize(est.objectives);
  est.ratio = Summarize({0.5, 0.75});
  const std::string path = (dir_ / "results.csv").string();
  WriteResultsCsv(est, path);
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "trial,objective,opt,ratio");
  EXPECT_EQ(lines[1], "0,1,2,0.5");
  EXPECT_EQ(lines[3], "mean,1.25,2,0.625");
  EXPECT_EQ(lines[4].rfind("se,", 0), 0u);
}

TEST(LoadPotentialTest, NamedSpecs) {
  EXPECT_EQ(LoadPotential("equal").kind(), PotentialKind::kEqualClosed);
  EXPECT_EQ(LoadPotential("unequal-closed").kind(),
            PotentialKind::kUnequalClosed);
  EXPECT_DOUBLE_EQ(LoadPotential("constant:0.5").gamma(), 0.5);
  EXPECT_ANY_THROW(LoadPotential("/nonexistent/f.csv"));
  EXPECT_EQ(ParseModel("rounded"), Model::kRounded);
  EXPECT_THROW(ParseModel("sampled"), std::invalid_argument);
}

}  // namespace
}  // namespace stochmatch
