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

#include "stochmatch/potential.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "stochmatch/errors.h"

namespace stochmatch {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e
constexpr double kMonotoneSlack = 1e-12;

// The integrands below are analytic on [0, 1] with the nearest complex
// singularity far from the interval, so a fixed 30-point rule is exact to
// rounding; an adaptive rule at this tolerance only burns time.
using Quadrature = boost::math::quadrature::gauss<double, 30>;

double Integrate(const auto& fn, double a, double b) {
  if (b <= a) return 0.0;
  return Quadrature::integrate(fn, a, b);
}

double EqualDenominator(double x) {
  const double d = 2.0 - x - std::exp(-x);
  assert(d > 0.3);
  return d;
}

// Integral over [x, 1] of 1 / (2 - y - e^-y).
double LogH(double x) {
  return Integrate([](double y) { return 1.0 / EqualDenominator(y); }, x, 1.0);
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

double ExpLinearIntegral(double s, double t, double ls, double lt) {
  const double u = t - s;
  if (u <= 0.0) return 0.0;
  const double one_minus = -std::expm1(-u);
  // (1 - e^-u (1 + u)) / u, the first moment of e^-z on [0, u] over u.
  const double moment =
      u < 1e-3 ? u * (0.5 + u * (-1.0 / 3.0 + u * (0.125 - u / 30.0)))
               : (one_minus - u * std::exp(-u)) / u;
  return std::exp(-s) * (ls * one_minus + (lt - ls) * moment);
}

// PotentialTable -------------------------------------------------------------

PotentialTable::PotentialTable(double upper, std::vector<double> values,
                               PotentialKind kind, int iteration)
    : upper_(upper), values_(std::move(values)), kind_(kind),
      iteration_(iteration) {
  if (!(upper_ > 0.0) || !std::isfinite(upper_)) {
    throw std::invalid_argument("potential table: upper must be positive");
  }
  if (values_.size() < 2) {
    throw std::invalid_argument("potential table: need at least 2 values");
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < -kMonotoneSlack || v > 1.0 + kMonotoneSlack) {
      throw std::invalid_argument("potential table: value " +
                                  std::to_string(i) + " outside [0, 1]");
    }
    if (i > 0 && v < values_[i - 1] - kMonotoneSlack) {
      throw std::invalid_argument("potential table: decreasing at index " +
                                  std::to_string(i));
    }
  }
  double run = 0.0;
  for (double& v : values_) {
    v = std::clamp(std::max(v, run), 0.0, 1.0);
    run = v;
  }
  step_ = upper_ / intervals();
  const int n = intervals();
  cum_f_.assign(n + 1, 0.0);
  cum_ef_.assign(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    cum_f_[j + 1] = cum_f_[j] + 0.5 * step_ * (values_[j] + values_[j + 1]);
    cum_ef_[j + 1] =
        cum_ef_[j] + ExpLinearIntegral(x(j), x(j + 1), values_[j], values_[j + 1]);
  }
}

PotentialTable PotentialTable::EqualClosed(int intervals) {
  if (intervals < 1) throw std::invalid_argument("grid must be positive");
  std::vector<double> v(intervals + 1);
  for (int i = 0; i <= intervals; ++i) v[i] = FEqual(static_cast<double>(i) / intervals);
  return PotentialTable(1.0, std::move(v), PotentialKind::kEqualClosed);
}

PotentialTable PotentialTable::UnequalClosed(int intervals) {
  if (intervals < 1) throw std::invalid_argument("grid must be positive");
  std::vector<double> v(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    v[i] = FUnequalClosed(static_cast<double>(i) / intervals);
  }
  return PotentialTable(1.0, std::move(v), PotentialKind::kUnequalClosed);
}

PotentialTable PotentialTable::Constant(double c, double upper, int intervals) {
  if (intervals < 1) throw std::invalid_argument("grid must be positive");
  return PotentialTable(upper, std::vector<double>(intervals + 1, c),
                        PotentialKind::kConstant);
}

std::string PotentialTable::kind_name() const {
  switch (kind_) {
    case PotentialKind::kEqualClosed:
      return "equal-closed";
    case PotentialKind::kUnequalClosed:
      return "unequal-closed";
    case PotentialKind::kUnequalIterated:
      return "unequal-iterated(" + std::to_string(iteration_) + ")";
    case PotentialKind::kConstant:
      return "constant(" + FormatNumber(values_[0]) + ")";
  }
  return "unknown";
}

int PotentialTable::Cell(double x) const {
  const int j = static_cast<int>(x / step_);
  return std::clamp(j, 0, intervals() - 1);
}

double PotentialTable::operator()(double x) const {
  if (x >= upper_) return values_.back();
  if (x <= 0.0) return values_[0];
  const int j = Cell(x);
  const double t = (x - this->x(j)) / step_;
  return values_[j] + (values_[j + 1] - values_[j]) * t;
}

double PotentialTable::F(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= upper_) return cum_f_.back() + values_.back() * (x - upper_);
  const int j = Cell(x);
  return cum_f_[j] + 0.5 * (x - this->x(j)) * (values_[j] + (*this)(x));
}

double PotentialTable::C(double x) const {
  if (x <= 0.0) return 0.0;
  return x - F(x);
}

double PotentialTable::Ef(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= upper_) {
    return cum_ef_.back() +
           values_.back() * (std::exp(-upper_) - std::exp(-x));
  }
  const int j = Cell(x);
  return cum_ef_[j] + ExpLinearIntegral(this->x(j), x, values_[j], (*this)(x));
}

double PotentialTable::E1(double x) const {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-x) - Ef(x);
}

double PotentialTable::InverseC(double target) const {
  if (target <= 0.0) return 0.0;
  const int n = intervals();
  auto c_at = [&](int i) { return x(i) - cum_f_[i]; };
  if (target > c_at(n)) {
    const double slope = 1.0 - values_.back();
    if (slope > 0.0) return upper_ + (target - c_at(n)) / slope;
    // A flat tail of 1 - f = 0 never reaches further; allow rounding noise.
    if (target > c_at(n) + 1e-12) {
      throw std::domain_error("InverseC: target beyond the range of C");
    }
    target = c_at(n);
  }
  int lo = 0, hi = n;  // c_at(lo) < target <= c_at(hi)
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (c_at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r = target - c_at(lo);
  const double b = 1.0 - values_[lo];
  const double slope = (values_[lo + 1] - values_[lo]) / step_;
  // Smallest root of (slope / 2) t^2 - b t + r = 0.
  const double disc = std::max(b * b - 2.0 * slope * r, 0.0);
  const double denom = b + std::sqrt(disc);
  double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
  t = std::clamp(t, 0.0, step_);
  return x(lo) + t;
}

double PotentialTable::LastLoadAtMost(double c) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), c);
  if (it == values_.begin()) return -std::numeric_limits<double>::infinity();
  if (it == values_.end()) return std::numeric_limits<double>::infinity();
  const int i = static_cast<int>(it - values_.begin());
  const double lo = values_[i - 1], hi = values_[i];
  return x(i - 1) + (c - lo) / (hi - lo) * step_;
}

void CutoffTable::Validate() const {
  if (values.size() < 2 || !(upper > 0.0)) {
    throw std::invalid_argument("cutoff table: malformed grid");
  }
  for (int i = 0; i <= intervals(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < -kMonotoneSlack || v > x(i) + kMonotoneSlack) {
      throw std::invalid_argument("cutoff table: g(x) outside [0, x] at index " +
                                  std::to_string(i));
    }
  }
}

// Closed forms ---------------------------------------------------------------

double FEqual(double x) {
  if (x >= 1.0) return 1.0 - kInvE;
  x = std::max(x, 0.0);
  const double log_h = LogH(x);
  const double tail = Integrate(
      [](double y) {
        return -std::expm1(-y) / EqualDenominator(y) * std::exp(LogH(y));
      },
      x, 1.0);
  return std::exp(-log_h) * (1.0 - kInvE + tail);
}

double FUnequalClosed(double x) {
  if (x > 1.0) return 1.0 - kInvE;
  x = std::max(x, 0.0);
  return 1.0 - 0.5 * std::exp(-x) - 0.5 * std::exp(x - 2.0);
}

double GammaEqual() { return 1.0 - FEqual(0.0); }

double GammaUnequalClosed() { return 0.5 * (1.0 + std::exp(-2.0)); }

double CUnequalClosed(double x) {
  if (x <= 0.0) return 0.0;
  const double y = std::min(x, 1.0);
  double c = -0.5 * std::expm1(-y) + 0.5 * (std::exp(y - 2.0) - std::exp(-2.0));
  if (x > 1.0) c += (x - 1.0) * kInvE;
  return c;
}

double SimplestResidualUnequal(double l) {
  return -std::expm1(-l) + (1.0 - FUnequalClosed(l)) - CUnequalClosed(l) -
         GammaUnequalClosed();
}

// Grid audits ----------------------------------------------------------------

double DeEqualSlack(const PotentialTable& f, double l, double p) {
  const double a = std::max(0.0, l - p);
  const double ea = std::exp(-a), el = std::exp(-l);
  // Integral of e^-t (t - (l - p)) over [a, l].
  const double kink = ea * (a + 1.0) - el * (l + 1.0) - (l - p) * (ea - el);
  return f.Ef(l) + (el * p + kink) * (1.0 - f(l)) - f.gamma() * p;
}

double DeUnequalSlack(const PotentialTable& f, double l, double p,
                      DeMode mode) {
  const double fl = f(l);
  const double el = std::exp(-l);
  if (mode == DeMode::kStdLp) {
    return p * (f.Ef(l) + el * (1.0 - fl) - f.gamma());
  }
  const double m = p * (1.0 - fl);
  const double cl = f.C(l);
  const double target = cl - m;
  const double a = target > 0.0 ? std::min(f.InverseC(target), l) : 0.0;
  const double ea = std::exp(-a);
  const double window =
      ea * (cl - f.C(a)) - (f.E1(l) - f.E1(a));  // int (1-f)(e^-a - e^-y)
  const double inner = m * (ea - el) - window;
  return f.Ef(l) + el * m + inner - f.gamma() * p;
}

namespace {

template <typename SlackFn>
DeAudit GridAudit(int grid_l, int grid_p, double l_max, SlackFn slack) {
  if (grid_l < 2 || grid_p < 2) {
    throw std::invalid_argument("grid audit needs at least 2 points per axis");
  }
  DeAudit out;
  bool first = true;
  for (int i = 0; i < grid_l; ++i) {
    const double l = l_max * i / (grid_l - 1);
    for (int k = 0; k < grid_p; ++k) {
      const double p = static_cast<double>(k) / (grid_p - 1);
      const double s = slack(l, p);
      ++out.cells;
      if (s < -out.tolerance) ++out.violations;
      if (first || s < out.min_slack) {
        out.min_slack = s;
        out.argmin_l = l;
        out.argmin_p = p;
        first = false;
      }
    }
  }
  return out;
}

}  // namespace

DeAudit CheckDeEqual(const PotentialTable& f, int grid_l, int grid_p,
                     double l_max) {
  return GridAudit(grid_l, grid_p, l_max,
                   [&](double l, double p) { return DeEqualSlack(f, l, p); });
}

DeAudit CheckDeUnequal(const PotentialTable& f, int grid_l, int grid_p,
                       double l_max, DeMode mode) {
  return GridAudit(grid_l, grid_p, l_max, [&](double l, double p) {
    return DeUnequalSlack(f, l, p, mode);
  });
}

double CheckOdeEqual(const PotentialTable& f) {
  double worst = 0.0;
  for (int i = 0; i <= f.intervals(); ++i) {
    const double l = f.x(i);
    if (l > 1.0 + 1e-12) break;
    const double lhs = f.Ef(l) + (1.0 - f(l)) * (2.0 - l - std::exp(-l));
    worst = std::max(worst, std::abs(lhs - f.gamma()));
  }
  return worst;
}

StdLpAudit AuditStdLp(const PotentialTable& f, double l_max, int points) {
  if (points < 2) throw std::invalid_argument("AuditStdLp: need 2 points");
  StdLpAudit out;
  for (int i = 0; i < points; ++i) {
    const double l = l_max * i / (points - 1);
    const double lhs = f.Ef(l) + std::exp(-l) * (1.0 - f(l));
    if (i == 0) {
      out.lhs_at_zero = lhs;
      out.inf_lhs = lhs;
    } else if (lhs < out.inf_lhs) {
      out.inf_lhs = lhs;
      out.argmin_l = l;
    }
  }
  return out;
}

// f/g iteration --------------------------------------------------------------

CutoffTable BestResponseG(const PotentialTable& f) {
  CutoffTable g;
  g.upper = f.upper();
  g.values.assign(f.intervals() + 1, 0.0);
  for (int i = 0; i <= f.intervals(); ++i) {
    const double l = f.x(i);
    const double target = f.C(l) - (1.0 - f.values()[i]);
    g.values[i] = target > 0.0 ? std::min(f.InverseC(target), l) : 0.0;
  }
  return g;
}

std::vector<double> RelaxedSlacks(const PotentialTable& f,
                                  const CutoffTable& g) {
  std::vector<double> out(g.intervals() + 1);
  for (int k = 0; k <= g.intervals(); ++k) {
    const double l = g.x(k);
    const double c = g.values[k];
    const double ec = std::exp(-c);
    const double window = ec * (f.C(l) - f.C(c)) - (f.E1(l) - f.E1(c));
    out[k] = f.Ef(l) + ec * (1.0 - f(l)) - window - f.gamma();
  }
  return out;
}

PotentialTable OptimizeFGivenG(const CutoffTable& g, const FgOptions& options,
                               FgSolve* detail) {
  g.Validate();
  const int n = g.intervals();
  const double h = g.step();
  const bool pinned = options.enforce_right_boundary;
  // Variables: increments d_1..d_n (f_i = f_0 + d_1 + ... + d_i), plus Gamma
  // when the right end is free.
  const int num_vars = pinned ? n : n + 1;
  LpProblem lp(num_vars);
  if (pinned) {
    std::fill(lp.objective.begin(), lp.objective.end(), 1.0);
  } else {
    lp.objective[n] = 1.0;
    lp.lower[n] = 0.0;
    lp.upper[n] = 1.0;
  }

  std::vector<double> c(n + 1);
  for (int k = 1; k <= n; ++k) {
    const double l = g.x(k);
    const double gk = g.values[k];
    const double eg = std::exp(-gk);
    std::fill(c.begin(), c.end(), 0.0);
    // The inequality is affine in f; c holds its gradient in the nodal values
    // of the interpolant, `base` its value at f = 0.
    for (int j = 0; j < k; ++j) {
      const double s = g.x(j), t = g.x(j + 1);
      c[j] += ExpLinearIntegral(s, t, 1.0, 0.0);
      c[j + 1] += ExpLinearIntegral(s, t, 0.0, 1.0);
      const double lo = std::max(s, gk);
      if (t > lo) {
        const double left_lo = (t - lo) / h;
        const double right_lo = (lo - s) / h;
        c[j] += eg * (t - lo) * 0.5 * left_lo -
                ExpLinearIntegral(lo, t, left_lo, 0.0);
        c[j + 1] += eg * (t - lo) * 0.5 * (right_lo + 1.0) -
                    ExpLinearIntegral(lo, t, right_lo, 1.0);
      }
    }
    c[k] -= eg;
    const double base = eg - (eg * (l - gk) - (eg - std::exp(-l)));

    double sum = 0.0;
    for (int i = 0; i <= k; ++i) sum += c[i];
    std::vector<double> row(num_vars, 0.0);
    double suffix = 0.0;
    for (int j = n; j >= 1; --j) {
      suffix += c[j];
      row[j - 1] = pinned ? 1.0 + sum - suffix : -suffix;
    }
    if (pinned) {
      lp.AddRow(std::move(row), RowSense::kLessEqual,
                base + sum * (1.0 - kInvE) - kInvE);
    } else {
      row[n] = 1.0 + sum;
      lp.AddRow(std::move(row), RowSense::kLessEqual, sum + base);
    }
  }
  {
    // f(upper) stays inside [0, 1].
    std::vector<double> row(num_vars, 1.0);
    if (pinned) {
      lp.AddRow(std::move(row), RowSense::kLessEqual, 1.0 - kInvE);
    } else {
      row[n] = -1.0;
      lp.AddRow(std::move(row), RowSense::kLessEqual, 0.0);
    }
  }

  LpSolution sol = SimplexSolve(lp);
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += std::max(sol.x[j], 0.0);
  const double gamma = pinned ? kInvE + total : sol.x[n];
  std::vector<double> values(n + 1);
  values[0] = 1.0 - gamma;
  for (int j = 1; j <= n; ++j) {
    values[j] = values[j - 1] + std::max(sol.x[j - 1], 0.0);
  }
  if (pinned) values[n] = 1.0 - kInvE;
  if (detail != nullptr) {
    detail->gamma = gamma;
    detail->lp = std::move(sol);
  }
  return PotentialTable(g.upper, std::move(values),
                        PotentialKind::kUnequalIterated, options.iteration);
}

std::vector<FgIterate> IterateFg(int iters, int grid, double l_max) {
  if (iters < 1) throw std::invalid_argument("IterateFg: iters must be >= 1");
  if (grid < 2) throw std::invalid_argument("IterateFg: grid must be >= 2");
  std::vector<FgIterate> out;
  PotentialTable f = PotentialTable::Constant(0.5, l_max, grid);
  for (int it = 1; it <= iters; ++it) {
    CutoffTable g = BestResponseG(f);
    FgOptions options;
    options.iteration = it;
    f = OptimizeFGivenG(g, options);
    out.push_back(FgIterate{f, std::move(g), f.gamma()});
  }
  return out;
}

// CSV ------------------------------------------------------------------------

namespace {

void WriteGridCsv(const std::string& path, const char* column, double upper,
                  const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "x," << column << "\n";
  const int n = static_cast<int>(values.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    out << FormatNumber(upper * i / n) << "," << FormatNumber(values[i])
        << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void WritePotentialCsv(const PotentialTable& f, const std::string& path) {
  WriteGridCsv(path, "f", f.upper(), f.values());
}

void WriteCutoffCsv(const CutoffTable& g, const std::string& path) {
  WriteGridCsv(path, "g", g.upper, g.values);
}

PotentialTable ReadPotentialCsv(const std::string& path, PotentialKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,f", 0) != 0) {
    throw ParseError(path + ":1", "expected header `x,f`");
  }
  std::vector<double> xs, fs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      throw ParseError(path + ":" + std::to_string(line_no),
                       "expected two columns");
    }
    try {
      size_t pa = 0, pb = 0;
      xs.push_back(std::stod(a, &pa));
      fs.push_back(std::stod(b, &pb));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no),
                       "non-numeric field");
    }
  }
  if (xs.size() < 2) throw ParseError(path, "need at least two rows");
  const double upper = xs.back();
  const int n = static_cast<int>(xs.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    if (std::abs(xs[i] - upper * i / n) > 1e-9 * std::max(1.0, upper)) {
      throw ParseError(path + ":" + std::to_string(i + 2),
                       "x column is not a uniform grid from 0");
    }
  }
  return PotentialTable(upper, std::move(fs), kind);
}

}  // namespace stochmatch
