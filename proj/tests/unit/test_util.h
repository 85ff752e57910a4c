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

// Hand-rolled generators and small independent oracles shared by the tests.

#ifndef STOCHMATCH_TESTS_TEST_UTIL_H_
#define STOCHMATCH_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stochmatch/instance.h"
#include "stochmatch/rng.h"

namespace stochmatch::testing {

// Random bipartite instance. With `equal_p` every edge carries `p`;
// otherwise p is drawn from (0, p]. Every online vertex gets at least one
// edge so runs are not trivially empty.
inline Instance RandomInstance(Rng& rng, int max_offline, int max_online,
                               double p, bool equal_p, bool weighted) {
  const int n_off = 1 + static_cast<int>(rng.Below(max_offline));
  const int n_on = 1 + static_cast<int>(rng.Below(max_online));
  const double density = 0.2 + 0.8 * rng.Uniform();
  InstanceData d;
  for (int u = 0; u < n_off; ++u) {
    d.offline.push_back(
        {"u" + std::to_string(u), weighted ? 0.1 + 2.0 * rng.Uniform() : 1.0});
  }
  for (int v = 0; v < n_on; ++v) {
    const std::string id = "v" + std::to_string(v);
    d.online.push_back(id);
    const int forced = static_cast<int>(rng.Below(n_off));
    for (int u = 0; u < n_off; ++u) {
      if (u != forced && rng.Uniform() >= density) continue;
      const double pe = equal_p ? p : p * (1.0 - rng.Uniform());
      d.edges.push_back({"u" + std::to_string(u), id, pe});
    }
  }
  return Instance(std::move(d));
}

// max c.x s.t. A x <= b, x >= 0 by enumerating every vertex of the
// polyhedron: choose n tight constraints among the rows and the bounds,
// solve, keep feasible points. Exponential; for LPs with a handful of
// variables only.
inline double VertexEnumerationLp(const std::vector<double>& c,
                                  const std::vector<std::vector<double>>& a,
                                  const std::vector<double>& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.size());
  // All constraints as g.x <= h, bounds included as -x_j <= 0.
  std::vector<std::vector<double>> g = a;
  std::vector<double> h = b;
  for (int j = 0; j < n; ++j) {
    std::vector<double> row(n, 0.0);
    row[j] = -1.0;
    g.push_back(row);
    h.push_back(0.0);
  }
  const int total = m + n;
  double best = -INFINITY;
  std::vector<int> pick(n);
  // Iterate over n-subsets of [0, total).
  std::vector<bool> sel(total, false);
  std::fill(sel.begin(), sel.begin() + n, true);
  do {
    int k = 0;
    for (int i = 0; i < total; ++i) {
      if (sel[i]) pick[k++] = i;
    }
    // Gaussian elimination with partial pivoting on the tight system.
    std::vector<std::vector<double>> mtx(n, std::vector<double>(n + 1));
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) mtx[r][j] = g[pick[r]][j];
      mtx[r][n] = h[pick[r]];
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(mtx[r][col]) > std::abs(mtx[piv][col])) piv = r;
      }
      if (std::abs(mtx[piv][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(mtx[piv], mtx[col]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double factor = mtx[r][col] / mtx[col][col];
        for (int j = col; j <= n; ++j) mtx[r][j] -= factor * mtx[col][j];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = mtx[j][n] / mtx[j][j];
    bool feasible = true;
    for (int i = 0; i < total && feasible; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += g[i][j] * x[j];
      feasible = lhs <= h[i] + 1e-9;
    }
    if (!feasible) continue;
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += c[j] * x[j];
    best = std::max(best, value);
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return best;
}

}  // namespace stochmatch::testing

#endif  // STOCHMATCH_TESTS_TEST_UTIL_H_
