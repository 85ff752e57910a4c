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

// Online algorithms with gain-sharing dual bookkeeping.
//
// Budget model: offline u is unsuccessful while its load is below theta_u.
// Matching v to u with probability p raises the load by p; the primal gain
// is w_u * min(p, theta_u - load), and it is split as
//   alpha_u += w_u (F(l + gain) - F(l)),  beta_v = w_u gain - that amount,
// so alpha_u = w_u F(min(l_u, theta_u)) holds throughout and every arrival
// satisfies primal gain = alpha increment + beta_v.

#ifndef STOCHMATCH_ALGORITHMS_H_
#define STOCHMATCH_ALGORITHMS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stochmatch/instance.h"
#include "stochmatch/potential.h"
#include "stochmatch/thresholds.h"

namespace stochmatch {

enum class Algorithm {
  kStochasticBalance,
  kWeighted,    // order-based by w p (1 - f(l))
  kGreedy,      // max p w
  kFractional,  // water-filling on p w (1 - f(l))
};

std::string ToString(Algorithm algo);
// "sb", "weighted", "greedy", "fractional".
Algorithm ParseAlgorithm(const std::string& name);
bool IsIntegral(Algorithm algo);

struct ArrivalRecord {
  int arrival = 0;
  int matched_to = -1;  // integral runs; -1 when unmatched
  std::vector<std::pair<int, double>> fractions;  // fractional runs: (u, x)
  // Load of each touched vertex after the arrival, aligned with matched_to
  // (one entry) or fractions.
  std::vector<double> load_after;
  double alpha_total = 0.0;
  double beta = 0.0;
  double primal_gain = 0.0;
  double primal_total = 0.0;
  bool success = false;  // rewards model: the attempt succeeded
};

struct RunTrace {
  Algorithm algorithm = Algorithm::kStochasticBalance;
  bool rewards_model = false;
  std::vector<ArrivalRecord> arrivals;
  std::vector<double> loads;
  std::vector<double> alpha;
  std::vector<double> beta;  // per online vertex
  std::vector<bool> successful;
  double objective = 0.0;
  // max over arrivals of |primal_total - (sum alpha + sum beta)|.
  double max_identity_error = 0.0;
  // loads after each arrival (row per arrival) when requested.
  std::vector<std::vector<double>> load_history;
};

struct RunOptions {
  bool record_arrivals = true;
  bool record_load_history = false;
};

// Shared default potential for Stochastic Balance duals.
const PotentialTable& DefaultEqualPotential();

// Throw std::invalid_argument unless the instance has equal probabilities.
RunTrace RunStochasticBalance(const Instance& inst, const ThresholdVector& th,
                              const RunOptions& options = {});
RunTrace RunWeightedOrderBased(const Instance& inst, const ThresholdVector& th,
                               const PotentialTable& f,
                               const RunOptions& options = {});
// Accepts unequal probabilities; duals split with `f`.
RunTrace RunGreedy(const Instance& inst, const ThresholdVector& th,
                   const PotentialTable& f, const RunOptions& options = {});

RunTrace RunFractional(const Instance& inst, const ThresholdVector& th,
                       const PotentialTable& f, const RunOptions& options = {});

// Fractional assignment of one arrival given current loads, by the tau
// characterization. Exposed for the rounding reduction and for tests.
std::vector<std::pair<int, double>> FractionalStep(
    const Instance& inst, int v, const std::vector<double>& loads,
    const std::vector<double>& theta, const PotentialTable& f);

// Integral rule in the budget model without the equal-probability
// precondition.
RunTrace RunIntegralRule(const Instance& inst, const ThresholdVector& th,
                         Algorithm algo, const PotentialTable& f,
                         const RunOptions& options = {});

// Dispatches on algo; the equal-probability precondition applies to sb and
// weighted.
RunTrace RunBudgetModel(const Instance& inst, const ThresholdVector& th,
                        Algorithm algo, const PotentialTable& f,
                        const RunOptions& options = {});

// Stochastic rewards: every attempt on (u, v) succeeds independently with
// probability p_uv and a successful u takes no further attempts. Loads and
// the selection rule are as in the budget model; objective is the weight of
// successful vertices. Stochastic Balance here also accepts unequal p.
struct RewardsRun {
  RunTrace trace;
  // For each successful u: load before its successful attempt and that
  // attempt's probability.
  std::vector<double> load_before_success;
  std::vector<double> success_p;
};
RewardsRun RunRewardsModel(const Instance& inst, Algorithm algo,
                           const PotentialTable& f, uint64_t seed,
                           uint64_t trial = 0);

// One row per arrival: arrival_id, matched_to, load_after, alpha_total,
// beta_v. Fractional rows list `u:x` pairs separated by ';'.
void WriteTraceCsv(const Instance& inst, const RunTrace& trace,
                   const std::string& path);

}  // namespace stochmatch

#endif  // STOCHMATCH_ALGORITHMS_H_
