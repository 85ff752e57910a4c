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

// LP benchmarks and the Monte Carlo dual-feasibility audit.

#ifndef STOCHMATCH_BENCHMARK_H_
#define STOCHMATCH_BENCHMARK_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "stochmatch/algorithms.h"
#include "stochmatch/instance.h"
#include "stochmatch/potential.h"
#include "stochmatch/simplex.h"
#include "stochmatch/thresholds.h"

namespace stochmatch {

// Standard matching LP:
//   max sum w_u p_uv x_uv  s.t.  sum_v p_uv x_uv <= 1,  sum_u x_uv <= 1,
//   0 <= x_uv <= 1.
// Online vertices with identical neighborhoods (same u and p) are merged
// into one class of multiplicity m, whose row bound becomes m; splitting a
// class solution evenly recovers an optimal x, so the value is exact.
struct StdLp {
  LpProblem problem;
  int num_classes = 0;
  // Column j is (column_u[j], class column_class[j]).
  std::vector<int> column_u;
  std::vector<int> column_class;
};
StdLp BuildStdLp(const Instance& inst, bool aggregate = true);
double StdLpOpt(const Instance& inst, bool aggregate = true);

// Configuration LP with one column per (u, non-empty S within N_u) and
// coefficient w_u p_u(S). Throws std::invalid_argument when some |N_u|
// exceeds max_neighbors.
double ConfigLpOptBruteforce(const Instance& inst, int max_neighbors = 12);

enum class AuditMode {
  kUnconditional,  // all thresholds redrawn every trial
  kConditional,    // theta_-u fixed per pair, theta_u redrawn
};

struct AuditConfig {
  Algorithm algorithm = Algorithm::kStochasticBalance;
  ThresholdLaw law = ThresholdLaw::kExponential;
  double law_param = 0.0;
  int pairs = 40;
  int64_t trials = 500;
  uint64_t seed = 1;
  AuditMode mode = AuditMode::kUnconditional;
  int workers = 0;
  double gamma = -1.0;       // declared ratio; negative uses f.gamma()
  double tolerance = 0.02;   // allowance below gamma before 3 SE
};

struct AuditPair {
  int u = 0;
  std::vector<int> subset;
  std::string kind;  // random, full, top-p, latest
  double p_us = 0.0;
  double est = 0.0;  // mean of alpha_u + sum_S beta_v
  double se = 0.0;
  double ratio = 0.0;     // est / (w_u p_u(S))
  double ratio_se = 0.0;
  bool violated = false;  // ratio < gamma - tolerance - 3 ratio_se
};

struct AuditReport {
  std::vector<AuditPair> pairs;
  double gamma = 0.0;
  double tolerance = 0.0;
  double min_ratio = 0.0;
  int argmin = -1;
  // min over pairs of ratio - (gamma - tolerance - 3 ratio_se).
  double min_margin = 0.0;
  int violations = 0;
  int64_t runs = 0;
  double max_identity_error = 0.0;
  int excluded_zero_mass = 0;
  AuditMode mode = AuditMode::kUnconditional;
};

// Pairs: half random subsets of N_u (uniform size, then uniform subset),
// half structured: S = N_u, the shortest top-p prefix reaching mass 1, and
// the latest arrivals reaching mass 1. Pairs with p_u(S) = 0 are dropped.
AuditReport AuditDualFeasibility(const Instance& inst, const PotentialTable& f,
                                 const AuditConfig& config);

// u,S_size,p_uS,est,se,ratio
void WriteAuditCsv(const Instance& inst, const AuditReport& report,
                   const std::string& path);
void PrintAuditSummary(const Instance& inst, const AuditReport& report,
                       std::ostream& os);

}  // namespace stochmatch

#endif  // STOCHMATCH_BENCHMARK_H_
