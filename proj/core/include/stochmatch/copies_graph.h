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

// Copies-graph view of Stochastic Balance with equal probabilities p.
//
// Offline u is replaced by copies (u, 0), (u, p), ..., one per unit of load
// it can absorb before its threshold; each arrival takes the free neighbor
// copy of smallest level, ties by offline id. Copy (u, k p) is matched at
// the k-th match of u, so this is an independent implementation of the
// same matching.

#ifndef STOCHMATCH_COPIES_GRAPH_H_
#define STOCHMATCH_COPIES_GRAPH_H_

#include <set>
#include <vector>

#include "stochmatch/instance.h"

namespace stochmatch {

struct CopyMatch {
  int u = -1;      // -1 when unmatched
  int level = 0;   // copy index k, load k p
};

// Throws std::invalid_argument unless probabilities are equal. theta may
// contain +inf.
std::vector<CopyMatch> CopiesGraphMatching(const Instance& inst,
                                           const std::vector<double>& theta);

// Arrivals matched to copies ranking strictly above (u, level) in the
// (level, offline id) order.
std::set<int> GoodSet(const Instance& inst,
                      const std::vector<CopyMatch>& matching, int u,
                      int level);

struct StructuralCheck {
  double l_inf = 0.0;        // load of u with theta_u = inf
  int symmetric_difference = 0;
  double bound = 0.0;        // (l_inf - theta_u) / p
  bool holds = true;
};

// Compares good sets of (inf, theta_-u) and (theta_u, theta_-u); theta_u is
// taken from `theta`. Requires theta_u < l_inf for a non-trivial bound.
StructuralCheck CheckEqualStructural(const Instance& inst,
                                     const std::vector<double>& theta, int u);

}  // namespace stochmatch

#endif  // STOCHMATCH_COPIES_GRAPH_H_
