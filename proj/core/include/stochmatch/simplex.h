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

// Dense two-phase primal simplex.
//
// Problems are small (a few thousand columns at most), so the engine keeps a
// full row-major tableau and favours determinism over speed. Entering columns
// use Dantzig's rule; when the objective makes no progress for more than m
// consecutive pivots the engine switches to Bland's rule until it does.

#ifndef STOCHMATCH_SIMPLEX_H_
#define STOCHMATCH_SIMPLEX_H_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace stochmatch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> coefficients;  // dense, one per variable
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

// maximize (or minimize) c.x subject to rows and lower <= x <= upper.
// Lower bounds may be -inf (free variables are split internally).
struct LpProblem {
  bool maximize = true;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LpProblem(int num_variables = 0)
      : objective(num_variables, 0.0),
        lower(num_variables, 0.0),
        upper(num_variables, kInfinity) {}

  int num_variables() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  // Appends a row and returns its index.
  int AddRow(std::vector<double> coefficients, RowSense sense, double rhs);

  // Throws LpError on non-finite coefficients or inconsistent dimensions.
  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* ToString(LpStatus status);

class LpError : public std::runtime_error {
 public:
  LpError(LpStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  LpStatus status() const { return status_; }

 private:
  LpStatus status_;
};

// Optimality certificate recomputed from the final basis.
struct LpCertificate {
  double primal_infeasibility = 0.0;  // max row/bound violation of x
  double dual_infeasibility = 0.0;    // max sign violation of y / reduced costs
  double complementary_slackness = 0.0;
  double duality_gap = 0.0;           // |c.x - dual objective|
};

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> x;
  // Row duals in the sign convention of the original problem: for a
  // maximization, y >= 0 on <= rows and y <= 0 on >= rows.
  std::vector<double> duals;
  int64_t iterations = 0;
  int64_t bland_iterations = 0;
  LpCertificate certificate;
};

struct SimplexOptions {
  int64_t max_iterations = 500000;
  double pivot_tolerance = 1e-11;
  double optimality_tolerance = 1e-11;
  double feasibility_tolerance = 1e-9;
};

// Solves `lp`. Returns a solution with status kOptimal or throws LpError for
// infeasible, unbounded, or iteration-limit outcomes.
LpSolution SimplexSolve(const LpProblem& lp, const SimplexOptions& options = {});

// Same as SimplexSolve but reports non-optimal outcomes through the status
// field instead of throwing.
LpSolution SimplexSolveNoThrow(const LpProblem& lp,
                               const SimplexOptions& options = {});

}  // namespace stochmatch

#endif  // STOCHMATCH_SIMPLEX_H_
