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

// Reward/budget coupling, rounding of fractional runs, and the Monte Carlo
// harness.
//
// Every random draw comes from Rng(seed, trial, purpose), so a trial's
// outcome depends only on (seed, trial) and never on scheduling.

#ifndef STOCHMATCH_SIMULATE_H_
#define STOCHMATCH_SIMULATE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stochmatch/algorithms.h"
#include "stochmatch/instance.h"
#include "stochmatch/potential.h"
#include "stochmatch/thresholds.h"

namespace stochmatch {

struct MonteCarloEstimate {
  double mean = 0.0;
  double se = 0.0;  // sample stddev / sqrt(trials); 0 for one trial
  int64_t trials = 0;
  uint64_t seed = 0;
};

MonteCarloEstimate Summarize(const std::vector<double>& samples,
                             uint64_t seed = 0);

// Runs fn(trial) for trial in [0, trials) on up to `workers` threads
// (0 = hardware concurrency). fn must only touch its own trial's output.
void ParallelFor(int64_t trials, int workers,
                 const std::function<void(int64_t)>& fn);

// Rewards run mirrored into a budget run. A vertex that succeeds at prior
// load l via an edge of probability p gets theta ~ Exp(1) conditioned on
// [l, l + p); other vertices get no draw and theta = +inf.
struct CoupledRun {
  RewardsRun rewards;
  ThresholdVector thresholds;
  RunTrace budget;            // replay of the same rule under `thresholds`
  double reward_objective = 0.0;  // sum w [success]
  double budget_objective = 0.0;  // sum w min(l, theta) in the replay
  double load_objective = 0.0;    // sum w l in the rewards run
  int draws_issued = 0;
  bool decisions_match = true;
};
CoupledRun CoupleRewardToBudget(const Instance& inst, Algorithm algo,
                                const PotentialTable& f, uint64_t seed,
                                uint64_t trial = 0);

// 3 p^(1/3) ln n by default; `constant` replaces the 3.
double DefaultDelta(double p_max, int n_offline, double constant = 3.0);

// Integral run A' driven by the fractional run A with budgets
// theta^A = theta^A' + delta; each arrival goes to u with probability
// x^A_uv. A' fails when some l^A'_u < l^A_u - delta after an arrival.
struct RoundingRun {
  RunTrace fractional;               // run A
  std::vector<double> theta;         // theta^A'
  std::vector<double> integral_loads;
  double fractional_objective = 0.0; // sum w l^A
  double integral_objective = 0.0;   // sum w min(l^A', theta^A')
  bool failed = false;
  int first_failure = -1;            // arrival index
  std::vector<double> max_drift;     // per u: max over arrivals l^A - l^A'
  // Per-u load paths (row per arrival) when requested.
  std::vector<std::vector<double>> fractional_history;
  std::vector<std::vector<double>> integral_history;
};
RoundingRun RoundFractionalToIntegral(const Instance& inst,
                                      const PotentialTable& f, double delta,
                                      uint64_t seed, uint64_t trial = 0,
                                      bool record_history = false);

// max over arrivals of a[i] - b[i]; 0 for empty paths.
double MaxDriftCheck(const std::vector<double>& a, const std::vector<double>& b);

// 2 exp(-t^2 / (4 a t + m)).
double MaximalBernsteinBound(double t, double a, double m);

enum class Model { kBudget, kRewards, kRounded };
std::string ToString(Model model);
Model ParseModel(const std::string& name);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kStochasticBalance;
  Model model = Model::kBudget;
  ThresholdLaw law = ThresholdLaw::kExponential;
  double law_param = 0.0;
  int64_t trials = 1000;
  uint64_t seed = 1;
  double delta = -1.0;  // rounding slack; negative selects DefaultDelta
  int workers = 0;
};

struct RatioEstimate {
  MonteCarloEstimate ratio;
  MonteCarloEstimate objective;
  double opt = 0.0;
  std::vector<double> objectives;  // per trial, in trial order
  double max_identity_error = 0.0;
  int64_t rounding_failures = 0;
};

// One trial's objective under the configured model.
struct TrialOutcome {
  double objective = 0.0;
  double identity_error = 0.0;
  bool failed = false;
};
TrialOutcome RunTrial(const Instance& inst, const ExperimentConfig& config,
                      const PotentialTable& f, int64_t trial);

// Mean of objective / StdLP optimum. `opt` <= 0 computes the optimum.
RatioEstimate EstimateRatio(const Instance& inst, const ExperimentConfig& config,
                            const PotentialTable& f, double opt = -1.0);

// Experiment file (JSON): instance, algorithm, potential, law, trials, seed,
// delta, plus optional model, law_param, workers.
struct ExperimentFile {
  std::string instance;
  std::string potential = "equal";
  ExperimentConfig config;
};
ExperimentFile ReadExperimentFile(const std::string& path);

// "equal", "unequal-closed", "constant:<c>", or a path to an x,f CSV.
PotentialTable LoadPotential(const std::string& spec);

// trial,objective,opt,ratio rows followed by mean and se rows.
void WriteResultsCsv(const RatioEstimate& est, const std::string& path);

}  // namespace stochmatch

#endif  // STOCHMATCH_SIMULATE_H_
