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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace stochmatch {
namespace {

double CommonP(const Instance& inst) {
  if (!inst.equal_probabilities()) {
    throw std::invalid_argument("copies graph requires equal probabilities");
  }
  return inst.num_edges() ? inst.p_max() : 1.0;
}

}  // namespace

std::vector<CopyMatch> CopiesGraphMatching(const Instance& inst,
                                           const std::vector<double>& theta) {
  const double p = CommonP(inst);
  const int n = inst.num_offline();
  std::vector<int> copies(n), used(n, 0);
  for (int u = 0; u < n; ++u) {
    const int degree = static_cast<int>(inst.offline_edges(u).size());
    if (std::isinf(theta[u])) {
      copies[u] = degree;
    } else {
      // Levels k p with k p < theta_u.
      copies[u] = static_cast<int>(std::ceil(theta[u] / p - 1e-9));
      copies[u] = std::clamp(copies[u], 0, degree);
    }
  }
  std::vector<CopyMatch> out(inst.num_online());
  for (int v = 0; v < inst.num_online(); ++v) {
    int best = -1;
    for (const Edge& e : inst.online_edges(v)) {
      if (used[e.u] >= copies[e.u]) continue;
      if (best < 0 || std::make_pair(used[e.u], inst.lex_rank(e.u)) <
                          std::make_pair(used[best], inst.lex_rank(best))) {
        best = e.u;
      }
    }
    if (best >= 0) out[v] = {best, used[best]++};
  }
  return out;
}

std::set<int> GoodSet(const Instance& inst,
                      const std::vector<CopyMatch>& matching, int u,
                      int level) {
  std::set<int> good;
  const auto pivot = std::make_pair(level, inst.lex_rank(u));
  for (int v = 0; v < static_cast<int>(matching.size()); ++v) {
    const CopyMatch& m = matching[v];
    if (m.u < 0) continue;
    if (std::make_pair(m.level, inst.lex_rank(m.u)) < pivot) good.insert(v);
  }
  return good;
}

StructuralCheck CheckEqualStructural(const Instance& inst,
                                     const std::vector<double>& theta, int u) {
  const double p = CommonP(inst);
  std::vector<double> unbounded = theta;
  unbounded[u] = std::numeric_limits<double>::infinity();
  const std::vector<CopyMatch> base = CopiesGraphMatching(inst, unbounded);
  int level = 0;
  for (const CopyMatch& m : base) level += m.u == u;

  StructuralCheck out;
  out.l_inf = level * p;
  const std::vector<CopyMatch> cut = CopiesGraphMatching(inst, theta);
  const std::set<int> a = GoodSet(inst, base, u, level);
  const std::set<int> b = GoodSet(inst, cut, u, level);
  std::vector<int> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(diff));
  out.symmetric_difference = static_cast<int>(diff.size());
  out.bound = (out.l_inf - theta[u]) / p;
  out.holds = out.symmetric_difference <= out.bound + 1e-9;
  return out;
}

}  // namespace stochmatch
