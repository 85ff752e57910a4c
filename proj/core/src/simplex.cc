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

#include "stochmatch/simplex.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

namespace stochmatch {

int LpProblem::AddRow(std::vector<double> coefficients, RowSense sense,
                      double rhs) {
  rows.push_back(LpRow{std::move(coefficients), sense, rhs});
  return num_rows() - 1;
}

void LpProblem::Validate() const {
  const int n = num_variables();
  auto fail = [](const std::string& msg) {
    throw LpError(LpStatus::kInfeasible, "invalid LP: " + msg);
  };
  if (static_cast<int>(lower.size()) != n ||
      static_cast<int>(upper.size()) != n) {
    fail("bound vectors do not match the number of variables");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) fail("non-finite objective coefficient");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInfinity ||
        upper[j] == -kInfinity || lower[j] > upper[j]) {
      std::ostringstream os;
      os << "bad bounds on variable " << j;
      fail(os.str());
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    const LpRow& row = rows[i];
    if (static_cast<int>(row.coefficients.size()) != n) {
      std::ostringstream os;
      os << "row " << i << " has " << row.coefficients.size()
         << " coefficients, expected " << n;
      fail(os.str());
    }
    if (!std::isfinite(row.rhs)) fail("non-finite right-hand side");
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) fail("non-finite constraint coefficient");
    }
  }
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration limit";
  }
  return "unknown";
}

namespace {

// How an original variable maps onto the non-negative internal columns.
struct VarMap {
  enum Kind { kShifted, kMirrored, kSplit } kind = kShifted;
  int column = -1;  // primary internal column
  int minus = -1;   // second column for kSplit
  double offset = 0.0;
};

// Full tableau with delayed updates. Each pivot is the rank-one update
// T <- T - u p^T; up to kBlock of them are kept as (u, p) pairs and applied
// together as one matrix product, which keeps the O(m n) per-pivot work
// cache-friendly. Current rows and columns are reconstructed on demand.
class Tableau {
 public:
  static constexpr int kBlock = 48;

  Tableau(int rows, int cols)
      : m_(rows), n_(cols),
        data_(static_cast<size_t>(rows) * cols, 0.0),
        rhs_(rows, 0.0), obj_(cols + 1, 0.0), basis_(rows, -1),
        u_(static_cast<size_t>(rows) * kBlock, 0.0),
        p_(static_cast<size_t>(cols) * kBlock, 0.0), p_rhs_(kBlock, 0.0) {}

  // Direct access to the stored matrix; only valid with no pending updates.
  double& raw(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
  double& rhs(int i) { return rhs_[i]; }
  double rhs(int i) const { return rhs_[i]; }
  std::vector<double>& obj() { return obj_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void Column(int c, std::vector<double>& out) const {
    out.resize(m_);
    for (int i = 0; i < m_; ++i) out[i] = data_[static_cast<size_t>(i) * n_ + c];
    for (int t = 0; t < pending_; ++t) {
      const double pc = p_[static_cast<size_t>(t) * n_ + c];
      if (pc == 0.0) continue;
      const double* u = &u_[static_cast<size_t>(t) * m_];
      for (int i = 0; i < m_; ++i) out[i] -= u[i] * pc;
    }
  }

  void Row(int r, std::vector<double>& out) const {
    out.assign(data_.begin() + static_cast<size_t>(r) * n_,
               data_.begin() + static_cast<size_t>(r + 1) * n_);
    for (int t = 0; t < pending_; ++t) {
      const double ur = u_[static_cast<size_t>(t) * m_ + r];
      if (ur == 0.0) continue;
      const double* p = &p_[static_cast<size_t>(t) * n_];
      for (int j = 0; j < n_; ++j) out[j] -= ur * p[j];
    }
  }

  // Sets the objective row to reduced costs of maximizing `cost`. Basis
  // entries >= cols() are implicit artificials with cost `implicit_cost`.
  void PriceObjective(const std::vector<double>& cost, double implicit_cost) {
    Flush();
    for (int j = 0; j < n_; ++j) obj_[j] = -cost[j];
    obj_[n_] = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double cb = basis_[i] >= n_ ? implicit_cost : cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &data_[static_cast<size_t>(i) * n_];
      for (int j = 0; j < n_; ++j) obj_[j] += cb * row[j];
      obj_[n_] += cb * rhs_[i];
    }
  }

  // Pivots on (r, c); `column` must hold the current column c.
  void Pivot(int r, int c, const std::vector<double>& column) {
    if (pending_ == kBlock) Flush();
    Row(r, row_scratch_);
    const int t = pending_++;
    double* p = &p_[static_cast<size_t>(t) * n_];
    double* u = &u_[static_cast<size_t>(t) * m_];
    const double inv = 1.0 / column[r];
    for (int j = 0; j < n_; ++j) p[j] = row_scratch_[j] * inv;
    p[c] = 1.0;
    const double pr = rhs_[r] * inv;
    p_rhs_[t] = pr;
    for (int i = 0; i < m_; ++i) u[i] = column[i];
    u[r] = column[r] - 1.0;
    for (int i = 0; i < m_; ++i) rhs_[i] -= u[i] * pr;
    rhs_[r] = pr;
    const double factor = obj_[c];
    if (factor != 0.0) {
      for (int j = 0; j < n_; ++j) obj_[j] -= factor * p[j];
      obj_[n_] -= factor * pr;
      obj_[c] = 0.0;
    }
    basis_[r] = c;
  }

  void Flush() {
    if (pending_ == 0) return;
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<RowMajor> t(data_.data(), m_, n_);
    Eigen::Map<const Eigen::MatrixXd> u(u_.data(), m_, pending_);
    Eigen::Map<const RowMajor> p(p_.data(), pending_, n_);
    t.noalias() -= u * p;
    pending_ = 0;
  }

 private:
  int m_;
  int n_;
  std::vector<double> data_;  // m x n, row-major, stale by `pending_` updates
  std::vector<double> rhs_;   // current
  std::vector<double> obj_;   // current reduced costs; obj_[n_] is the value
  std::vector<int> basis_;
  std::vector<double> u_;     // pending update columns, column-major m x k
  std::vector<double> p_;     // pending update rows, row-major k x n
  std::vector<double> p_rhs_;
  std::vector<double> row_scratch_;
  int pending_ = 0;
};

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

// Maximizes the objective currently priced into `t`.
PhaseResult RunPhase(Tableau& t, const std::vector<bool>& may_enter,
                     const SimplexOptions& opt, int64_t& iterations,
                     int64_t& bland_iterations) {
  const int m = t.rows();
  const int n = t.cols();
  std::vector<double>& obj = t.obj();
  std::vector<double> column;
  int stall = 0;
  bool bland = false;
  double last_value = obj[n];
  while (true) {
    if (iterations >= opt.max_iterations) return PhaseResult::kIterationLimit;
    int enter = -1;
    if (bland) {
      for (int j = 0; j < n; ++j) {
        if (may_enter[j] && obj[j] < -opt.optimality_tolerance) {
          enter = j;
          break;
        }
      }
    } else {
      double best = -opt.optimality_tolerance;
      for (int j = 0; j < n; ++j) {
        if (may_enter[j] && obj[j] < best) {
          best = obj[j];
          enter = j;
        }
      }
    }
    if (enter < 0) return PhaseResult::kOptimal;

    t.Column(enter, column);
    int leave = -1;
    double best_ratio = kInfinity;
    double best_pivot = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = column[i];
      if (a <= opt.pivot_tolerance) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leave < 0 || ratio < best_ratio - 1e-14) {
        leave = i;
        best_ratio = ratio;
        best_pivot = a;
      } else if (ratio <= best_ratio + 1e-14) {
        const bool better =
            bland ? t.basis()[i] < t.basis()[leave] : a > best_pivot;
        if (better) {
          leave = i;
          best_ratio = std::min(ratio, best_ratio);
          best_pivot = a;
        }
      }
    }
    if (leave < 0) return PhaseResult::kUnbounded;

    t.Pivot(leave, enter, column);
    ++iterations;
    if (bland) ++bland_iterations;
    if (obj[n] > last_value + 1e-13 * (1.0 + std::abs(last_value))) {
      last_value = obj[n];
      stall = 0;
      bland = false;
    } else if (++stall > m) {
      bland = true;
    }
  }
}

LpSolution Solve(const LpProblem& lp, const SimplexOptions& opt) {
  lp.Validate();
  const int n = lp.num_variables();
  const double sign = lp.maximize ? 1.0 : -1.0;

  // Internal columns for structural variables.
  std::vector<VarMap> map(n);
  int num_struct = 0;
  struct BoundRow {
    int column;
    double bound;
  };
  std::vector<BoundRow> bound_rows;
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower[j], hi = lp.upper[j];
    VarMap& vm = map[j];
    if (std::isfinite(lo)) {
      vm.kind = VarMap::kShifted;
      vm.column = num_struct++;
      vm.offset = lo;
      if (std::isfinite(hi)) bound_rows.push_back({vm.column, hi - lo});
    } else if (std::isfinite(hi)) {
      vm.kind = VarMap::kMirrored;
      vm.column = num_struct++;
      vm.offset = hi;
    } else {
      vm.kind = VarMap::kSplit;
      vm.column = num_struct++;
      vm.minus = num_struct++;
    }
  }

  // Rows in internal form: coefficients over structural columns.
  const int m_orig = lp.num_rows();
  const int m = m_orig + static_cast<int>(bound_rows.size());
  std::vector<std::vector<double>> a(m, std::vector<double>(num_struct, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<RowSense> sense(m, RowSense::kLessEqual);
  for (int i = 0; i < m_orig; ++i) {
    const LpRow& row = lp.rows[i];
    double rhs = row.rhs;
    for (int j = 0; j < n; ++j) {
      const double c = row.coefficients[j];
      if (c == 0.0) continue;
      const VarMap& vm = map[j];
      switch (vm.kind) {
        case VarMap::kShifted:
          a[i][vm.column] += c;
          rhs -= c * vm.offset;
          break;
        case VarMap::kMirrored:
          a[i][vm.column] -= c;
          rhs -= c * vm.offset;
          break;
        case VarMap::kSplit:
          a[i][vm.column] += c;
          a[i][vm.minus] -= c;
          break;
      }
    }
    b[i] = rhs;
    sense[i] = row.sense;
  }
  for (size_t k = 0; k < bound_rows.size(); ++k) {
    const int i = m_orig + static_cast<int>(k);
    a[i][bound_rows[k].column] = 1.0;
    b[i] = bound_rows[k].bound;
  }
  std::vector<bool> negated(m, false);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      negated[i] = true;
      b[i] = -b[i];
      for (double& v : a[i]) v = -v;
      if (sense[i] == RowSense::kLessEqual) {
        sense[i] = RowSense::kGreaterEqual;
      } else if (sense[i] == RowSense::kGreaterEqual) {
        sense[i] = RowSense::kLessEqual;
      }
    }
  }

  // Column layout: structural | slack/surplus | artificial (= rows only).
  // Artificials of >= rows are implicit: they start basic, can never
  // re-enter once they leave, and the row dual is read off the surplus
  // column, so they need no tableau column.
  int num_cols = num_struct;
  std::vector<int> logical_col(m, -1), artificial_col(m, -1);
  for (int i = 0; i < m; ++i) {
    if (sense[i] != RowSense::kEqual) logical_col[i] = num_cols++;
  }
  const int first_artificial = num_cols;
  for (int i = 0; i < m; ++i) {
    if (sense[i] == RowSense::kEqual) artificial_col[i] = num_cols++;
  }
  bool any_artificial = false;
  for (int i = 0; i < m; ++i) {
    if (sense[i] == RowSense::kGreaterEqual) {
      artificial_col[i] = num_cols + i;  // implicit
    }
    if (sense[i] != RowSense::kLessEqual) any_artificial = true;
  }

  Tableau t(m, num_cols);
  std::vector<int> initial_col(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < num_struct; ++j) t.raw(i, j) = a[i][j];
    // initial_col is the column whose reduced cost yields the row dual.
    if (sense[i] == RowSense::kLessEqual) {
      t.raw(i, logical_col[i]) = 1.0;
      initial_col[i] = logical_col[i];
      t.basis()[i] = logical_col[i];
    } else if (sense[i] == RowSense::kGreaterEqual) {
      t.raw(i, logical_col[i]) = -1.0;
      initial_col[i] = logical_col[i];
      t.basis()[i] = artificial_col[i];
    } else {
      t.raw(i, artificial_col[i]) = 1.0;
      initial_col[i] = artificial_col[i];
      t.basis()[i] = artificial_col[i];
    }
    t.rhs(i) = b[i];
  }
  a.clear();
  a.shrink_to_fit();

  LpSolution sol;
  std::vector<bool> may_enter(num_cols, true);

  // Phase 1: maximize minus the sum of artificials.
  if (any_artificial) {
    std::vector<double> cost1(num_cols, 0.0);
    for (int j = first_artificial; j < num_cols; ++j) cost1[j] = -1.0;
    t.PriceObjective(cost1, -1.0);
    PhaseResult r =
        RunPhase(t, may_enter, opt, sol.iterations, sol.bland_iterations);
    if (r == PhaseResult::kIterationLimit) {
      sol.status = LpStatus::kIterationLimit;
      return sol;
    }
    if (-t.obj()[num_cols] > opt.feasibility_tolerance) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    std::vector<double> row, column;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      t.Row(i, row);
      int best = -1;
      double best_abs = opt.pivot_tolerance;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      if (best >= 0) {
        t.Column(best, column);
        t.Pivot(i, best, column);
        ++sol.iterations;
      }
    }
    for (int j = first_artificial; j < num_cols; ++j) may_enter[j] = false;
  }

  // Phase 2.
  std::vector<double> cost(num_cols, 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = map[j];
    const double c = sign * lp.objective[j];
    if (vm.kind == VarMap::kShifted) cost[vm.column] = c;
    if (vm.kind == VarMap::kMirrored) cost[vm.column] = -c;
    if (vm.kind == VarMap::kSplit) {
      cost[vm.column] = c;
      cost[vm.minus] = -c;
    }
  }
  t.PriceObjective(cost, 0.0);
  PhaseResult r =
      RunPhase(t, may_enter, opt, sol.iterations, sol.bland_iterations);
  if (r == PhaseResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }
  if (r == PhaseResult::kIterationLimit) {
    sol.status = LpStatus::kIterationLimit;
    return sol;
  }

  // Recover the primal point.
  std::vector<double> internal(num_cols, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis()[i] < num_cols) internal[t.basis()[i]] = t.rhs(i);
  }
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = map[j];
    switch (vm.kind) {
      case VarMap::kShifted:
        sol.x[j] = vm.offset + internal[vm.column];
        break;
      case VarMap::kMirrored:
        sol.x[j] = vm.offset - internal[vm.column];
        break;
      case VarMap::kSplit:
        sol.x[j] = internal[vm.column] - internal[vm.minus];
        break;
    }
  }
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];

  // Duals of the maximization form, read off the initial basis columns.
  std::vector<double> y(m_orig);
  for (int i = 0; i < m_orig; ++i) {
    double yi = t.obj()[initial_col[i]];
    if (sense[i] == RowSense::kGreaterEqual) yi = -yi;
    if (negated[i]) yi = -yi;
    y[i] = yi;
  }
  sol.duals.resize(m_orig);
  for (int i = 0; i < m_orig; ++i) sol.duals[i] = sign * y[i];

  // Certificate, computed in the maximization form.
  LpCertificate& cert = sol.certificate;
  double dual_obj = 0.0;
  for (int i = 0; i < m_orig; ++i) {
    const LpRow& row = lp.rows[i];
    double act = 0.0;
    for (int j = 0; j < n; ++j) act += row.coefficients[j] * sol.x[j];
    const double slack = row.rhs - act;
    double viol = 0.0;
    if (row.sense == RowSense::kLessEqual) viol = std::max(0.0, -slack);
    if (row.sense == RowSense::kGreaterEqual) viol = std::max(0.0, slack);
    if (row.sense == RowSense::kEqual) viol = std::abs(slack);
    cert.primal_infeasibility = std::max(cert.primal_infeasibility, viol);
    double dviol = 0.0;
    if (row.sense == RowSense::kLessEqual) dviol = std::max(0.0, -y[i]);
    if (row.sense == RowSense::kGreaterEqual) dviol = std::max(0.0, y[i]);
    cert.dual_infeasibility = std::max(cert.dual_infeasibility, dviol);
    if (row.sense != RowSense::kEqual) {
      cert.complementary_slackness =
          std::max(cert.complementary_slackness, std::abs(y[i] * slack));
    }
    dual_obj += y[i] * row.rhs;
  }
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower[j], hi = lp.upper[j];
    const double xj = sol.x[j];
    cert.primal_infeasibility =
        std::max({cert.primal_infeasibility, std::max(0.0, lo - xj),
                  std::max(0.0, xj - hi)});
    double reduced = sign * lp.objective[j];
    for (int i = 0; i < m_orig; ++i) {
      reduced -= y[i] * lp.rows[i].coefficients[j];
    }
    const double up_dual = std::max(reduced, 0.0);
    const double low_dual = std::max(-reduced, 0.0);
    if (up_dual > 0.0) {
      if (std::isfinite(hi)) {
        dual_obj += up_dual * hi;
        cert.complementary_slackness =
            std::max(cert.complementary_slackness, up_dual * (hi - xj));
      } else {
        cert.dual_infeasibility = std::max(cert.dual_infeasibility, up_dual);
      }
    }
    if (low_dual > 0.0) {
      if (std::isfinite(lo)) {
        dual_obj -= low_dual * lo;
        cert.complementary_slackness =
            std::max(cert.complementary_slackness, low_dual * (xj - lo));
      } else {
        cert.dual_infeasibility = std::max(cert.dual_infeasibility, low_dual);
      }
    }
  }
  cert.duality_gap = std::abs(sign * sol.objective - dual_obj);
  sol.status = LpStatus::kOptimal;
  return sol;
}

}  // namespace

LpSolution SimplexSolveNoThrow(const LpProblem& lp,
                               const SimplexOptions& options) {
  return Solve(lp, options);
}

LpSolution SimplexSolve(const LpProblem& lp, const SimplexOptions& options) {
  LpSolution sol = Solve(lp, options);
  if (sol.status != LpStatus::kOptimal) {
    throw LpError(sol.status,
                  std::string("simplex: LP is ") + ToString(sol.status));
  }
  return sol;
}

}  // namespace stochmatch
