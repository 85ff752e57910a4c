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

// Seeded random streams.
//
// Every stream is an mt19937_64 seeded with
//   SplitMix64(master ^ SplitMix64(trial ^ SplitMix64(purpose))),
// so (master seed, trial index, purpose tag) fully determines its draws and
// parallel trials never share a stream. Continuous draws use our own
// inversion on 53-bit uniforms rather than <random> distributions, whose
// output is implementation-defined.

#ifndef STOCHMATCH_RNG_H_
#define STOCHMATCH_RNG_H_

#include <cstdint>
#include <cmath>
#include <random>

namespace stochmatch {

enum class Purpose : uint64_t {
  kInstance = 1,
  kThresholds = 2,
  kRounding = 3,
  kRewards = 4,
  kCoupling = 5,
  kAudit = 6,
  kSubsets = 7,
};

uint64_t SplitMix64(uint64_t x);
uint64_t DeriveSeed(uint64_t master, uint64_t trial, Purpose purpose);

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  Rng(uint64_t master, uint64_t trial, Purpose purpose)
      : engine_(DeriveSeed(master, trial, purpose)) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double UniformPositive() { return 1.0 - Uniform(); }
  double Exponential() { return -std::log(UniformPositive()); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace stochmatch

#endif  // STOCHMATCH_RNG_H_
