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

// Budget (threshold) vectors and the laws they are drawn from.

#ifndef STOCHMATCH_THRESHOLDS_H_
#define STOCHMATCH_THRESHOLDS_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace stochmatch {

enum class ThresholdLaw {
  kExponential,    // Exp(1)
  kGeometric,      // (i - 1) p + U p, i ~ Geometric(p) on {1, 2, ...}
  kDeltaEnhanced,  // delta + Exp(1)
  kFixed,          // supplied directly (replays, unbounded runs)
};

std::string ToString(ThresholdLaw law);
// Accepts "exponential", "geometric", "delta-enhanced"; throws
// std::invalid_argument otherwise.
ThresholdLaw ParseThresholdLaw(const std::string& name);

struct ThresholdVector {
  std::vector<double> theta;
  ThresholdLaw law = ThresholdLaw::kFixed;
  double param = 0.0;  // p for geometric, delta for delta-enhanced

  static ThresholdVector Unbounded(int n) {
    return {std::vector<double>(n, std::numeric_limits<double>::infinity()),
            ThresholdLaw::kFixed, 0.0};
  }
};

// Independent draws for n offline vertices from the stream (seed, trial,
// thresholds). Throws std::invalid_argument when p is outside (0, 1] for the
// geometric law or delta < 0 for the enhanced law.
ThresholdVector SampleThresholds(int n, ThresholdLaw law, double param,
                                 uint64_t seed, uint64_t trial = 0);

}  // namespace stochmatch

#endif  // STOCHMATCH_THRESHOLDS_H_
