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

#include <vector>

#include "benchmark/benchmark.h"
#include "stochmatch/algorithms.h"
#include "stochmatch/benchmark.h"
#include "stochmatch/instance.h"
#include "stochmatch/potential.h"
#include "stochmatch/thresholds.h"

namespace stochmatch {
namespace {

void BM_EqualClosedTable(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        PotentialTable::EqualClosed(static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_EqualClosedTable)->Arg(200)->Arg(2000);

// The f-given-g LP is the dense simplex workload of the iteration.
void BM_OptimizeFGivenG(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  const CutoffTable g = BestResponseG(PotentialTable::Constant(0.5, 2.0, grid));
  for (auto _ : state) benchmark::DoNotOptimize(OptimizeFGivenG(g));
}
BENCHMARK(BM_OptimizeFGivenG)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_StdLp(benchmark::State& state) {
  const Instance inst =
      GenUpperTriangular(static_cast<int>(state.range(0)), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(StdLpOpt(inst));
}
BENCHMARK(BM_StdLp)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FractionalStep(benchmark::State& state) {
  RandomInstanceParams params;
  params.num_offline = static_cast<int>(state.range(0));
  params.num_online = 1;
  params.density = 1.0;
  params.p_lo = 0.001;
  params.p_hi = 0.05;
  params.w_hi = 3.0;
  const Instance inst = GenRandom(params, 1);
  const PotentialTable f = PotentialTable::UnequalClosed();
  std::vector<double> loads(inst.num_offline());
  for (int u = 0; u < inst.num_offline(); ++u) loads[u] = 0.01 * u;
  const std::vector<double> theta(inst.num_offline(), 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FractionalStep(inst, 0, loads, theta, f));
  }
}
BENCHMARK(BM_FractionalStep)->Arg(8)->Arg(64)->Arg(512);

void BM_StochasticBalanceRun(benchmark::State& state) {
  const Instance inst =
      GenUpperTriangular(static_cast<int>(state.range(0)), 0.01);
  const ThresholdVector th = SampleThresholds(
      inst.num_offline(), ThresholdLaw::kExponential, 0.0, 1);
  RunOptions options;
  options.record_arrivals = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunStochasticBalance(inst, th, options));
  }
  state.SetItemsProcessed(state.iterations() * inst.num_online());
}
BENCHMARK(BM_StochasticBalanceRun)->Arg(10)->Arg(50);

void BM_FractionalRun(benchmark::State& state) {
  const Instance inst = GenCascade(static_cast<int>(state.range(0)), 0.02);
  const ThresholdVector th = SampleThresholds(
      inst.num_offline(), ThresholdLaw::kExponential, 0.0, 1);
  const PotentialTable f = PotentialTable::UnequalClosed();
  RunOptions options;
  options.record_arrivals = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunFractional(inst, th, f, options));
  }
  state.SetItemsProcessed(state.iterations() * inst.num_online());
}
BENCHMARK(BM_FractionalRun)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace stochmatch

BENCHMARK_MAIN();
