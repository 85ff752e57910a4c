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

// Gain-sharing potentials f, their load-grid tables, grid audits of the
// dual-feasibility inequalities, and the alternating f/g optimization.
//
// A PotentialTable stores f on a uniform grid and interpolates linearly;
// every integral it exposes (F, C, Ef, E1) is the exact integral of that
// interpolant, so checks built from them carry no extra quadrature error.

#ifndef STOCHMATCH_POTENTIAL_H_
#define STOCHMATCH_POTENTIAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "stochmatch/simplex.h"

namespace stochmatch {

inline constexpr int kDefaultPotentialGrid = 2000;

enum class PotentialKind {
  kEqualClosed,
  kUnequalClosed,
  kUnequalIterated,
  kConstant,
};

class PotentialTable {
 public:
  // `values[i]` is f(i * upper / (values.size() - 1)). Throws
  // std::invalid_argument unless values are finite, inside [0, 1] and
  // non-decreasing (1e-12 slack).
  PotentialTable(double upper, std::vector<double> values, PotentialKind kind,
                 int iteration = 0);

  static PotentialTable EqualClosed(int intervals = kDefaultPotentialGrid);
  static PotentialTable UnequalClosed(int intervals = kDefaultPotentialGrid);
  static PotentialTable Constant(double c, double upper = 2.0,
                                 int intervals = 2);

  int intervals() const { return static_cast<int>(values_.size()) - 1; }
  double upper() const { return upper_; }
  double step() const { return step_; }
  double x(int i) const { return i * step_; }
  const std::vector<double>& values() const { return values_; }
  PotentialKind kind() const { return kind_; }
  int iteration() const { return iteration_; }
  std::string kind_name() const;

  // Declared ratio, 1 - f(0).
  double gamma() const { return 1.0 - values_[0]; }

  // f at load x >= 0; constant past the grid.
  double operator()(double x) const;
  double F(double x) const;   // integral of f over [0, x]
  double C(double x) const;   // integral of 1 - f over [0, x]
  double Ef(double x) const;  // integral of e^-y f(y) over [0, x]
  double E1(double x) const;  // integral of e^-y (1 - f(y)) over [0, x]

  // Smallest x >= 0 with C(x) = target; target must lie in [0, C(inf)].
  double InverseC(double target) const;

  // sup{y >= 0 : f(y) <= c}: +inf when c >= f(upper), -inf when c < f(0).
  double LastLoadAtMost(double c) const;

 private:
  int Cell(double x) const;

  double upper_;
  double step_;
  std::vector<double> values_;
  std::vector<double> cum_f_;   // F at grid points
  std::vector<double> cum_ef_;  // Ef at grid points
  PotentialKind kind_;
  int iteration_;
};

// g on the same uniform grid as the potential it answers.
struct CutoffTable {
  double upper = 2.0;
  std::vector<double> values;

  int intervals() const { return static_cast<int>(values.size()) - 1; }
  double step() const { return upper / intervals(); }
  double x(int i) const { return i * step(); }
  // Throws std::invalid_argument unless 0 <= g(x_i) <= x_i (1e-12 slack).
  void Validate() const;
};

// Closed forms.
double FEqual(double x);
double FUnequalClosed(double x);
double GammaEqual();           // 1 - FEqual(0)
double GammaUnequalClosed();   // (1 + e^-2) / 2
// Integral of 1 - FUnequalClosed over [0, x].
double CUnequalClosed(double x);

// Residual of the equality 1 - e^-l + (1 - f(l)) - C(l) = Gamma for the
// closed unequal potential, evaluated analytically.
double SimplestResidualUnequal(double l);

struct DeAudit {
  double min_slack = 0.0;
  double argmin_l = 0.0;
  double argmin_p = 0.0;
  int64_t cells = 0;
  int64_t violations = 0;  // cells with slack below -tolerance
  double tolerance = 1e-6;
};

// Which inner term the unequal inequality carries. kStdLp drops the
// online-side integral, which is what the standard matching LP yields.
enum class DeMode { kConfigLp, kStdLp };

// Pointwise slack LHS - Gamma * p.
double DeEqualSlack(const PotentialTable& f, double l, double p);
double DeUnequalSlack(const PotentialTable& f, double l, double p,
                      DeMode mode = DeMode::kConfigLp);

// Grid audits over [0, l_max] x [0, 1], grid_l x grid_p cells including both
// end points. Cells are scanned in a fixed order so the argmin is stable.
DeAudit CheckDeEqual(const PotentialTable& f, int grid_l = 200,
                     int grid_p = 200, double l_max = 3.0);
DeAudit CheckDeUnequal(const PotentialTable& f, int grid_l = 200,
                       int grid_p = 200, double l_max = 3.0,
                       DeMode mode = DeMode::kConfigLp);

// max over the table grid points in [0, 1] of
// |Ef(l) + (1 - f(l)) (2 - l - e^-l) - Gamma|.
double CheckOdeEqual(const PotentialTable& f);

// inf over an l grid on [0, l_max] of Ef(l) + e^-l (1 - f(l)).
struct StdLpAudit {
  double inf_lhs = 0.0;
  double argmin_l = 0.0;
  double lhs_at_zero = 0.0;
};
StdLpAudit AuditStdLp(const PotentialTable& f, double l_max = 10.0,
                      int points = 10001);

// For each grid point l, the g solving C(l) - C(g) = 1 - f(l), or 0 when
// 1 - f(l) exceeds C(l).
CutoffTable BestResponseG(const PotentialTable& f);

// Slack of the relaxed inequality at every grid point of g, computed from
// the table integrals (independent of the LP rows).
std::vector<double> RelaxedSlacks(const PotentialTable& f,
                                  const CutoffTable& g);

struct FgOptions {
  // Pin f(upper) = 1 - 1/e. Without it f(upper) is only bounded by 1.
  bool enforce_right_boundary = true;
  int iteration = 0;  // recorded on the returned table
};

struct FgSolve {
  double gamma = 0.0;  // LP optimum
  LpSolution lp;
};

// Maximizes Gamma over non-decreasing piecewise-linear f on g's grid subject
// to the relaxed inequality at every grid point and f(0) = 1 - Gamma. Throws
// LpError if the discretization is infeasible.
PotentialTable OptimizeFGivenG(const CutoffTable& g,
                               const FgOptions& options = {},
                               FgSolve* detail = nullptr);

struct FgIterate {
  PotentialTable f;
  CutoffTable g;
  double gamma;
};

// Starts from f = 1/2 on [0, l_max] and alternates BestResponseG and
// OptimizeFGivenG `iters` times.
std::vector<FgIterate> IterateFg(int iters, int grid = kDefaultPotentialGrid,
                                 double l_max = 2.0);

// CSV with header `x,f` (or `x,g`), 12 significant digits.
void WritePotentialCsv(const PotentialTable& f, const std::string& path);
void WriteCutoffCsv(const CutoffTable& g, const std::string& path);
// Reads a uniform-grid `x,f` table starting at 0.
PotentialTable ReadPotentialCsv(
    const std::string& path,
    PotentialKind kind = PotentialKind::kUnequalIterated);

// Integral over [s, t] of e^-y L(y) where L is linear with L(s) = ls and
// L(t) = lt.
double ExpLinearIntegral(double s, double t, double ls, double lt);

}  // namespace stochmatch

#endif  // STOCHMATCH_POTENTIAL_H_
