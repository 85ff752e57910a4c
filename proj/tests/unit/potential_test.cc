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

#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "stochmatch/rng.h"

namespace stochmatch {
namespace {

const double kOneMinusInvE = 1.0 - std::exp(-1.0);

// Integrates the differentiated equality form backwards from f(1) = 1 - 1/e:
//   f'(l) (2 - l - e^-l) = f(l) - (1 - e^-l).
// Classic RK4, independent of the quadrature used by FEqual.
double RungeKuttaFEqual(double target, int steps = 20000) {
  auto rhs = [](double l, double f) {
    return (f - 1.0 + std::exp(-l)) / (2.0 - l - std::exp(-l));
  };
  const double h = -(1.0 - target) / steps;
  double l = 1.0, f = kOneMinusInvE;
  for (int i = 0; i < steps; ++i) {
    const double k1 = rhs(l, f);
    const double k2 = rhs(l + h / 2, f + h / 2 * k1);
    const double k3 = rhs(l + h / 2, f + h / 2 * k2);
    const double k4 = rhs(l + h, f + h * k3);
    f += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    l += h;
  }
  return f;
}

// Composite Simpson on [a, b] with n (even) panels.
template <typename Fn>
double Simpson(Fn fn, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = fn(a) + fn(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  return s * h / 3.0;
}

PotentialTable RandomTable(Rng& rng) {
  const int n = 2 + static_cast<int>(rng.Below(30));
  std::vector<double> values(n + 1);
  double v = 0.5 * rng.Uniform();
  for (double& x : values) {
    // Flat stretches are common in optimized tables; keep some.
    if (rng.Uniform() < 0.7) v = std::min(1.0, v + 0.1 * rng.Uniform());
    x = v;
  }
  return PotentialTable(0.5 + 2.5 * rng.Uniform(), values,
                        PotentialKind::kUnequalIterated);
}

TEST(FEqualTest, BoundaryAndExtension) {
  EXPECT_NEAR(FEqual(1.0), kOneMinusInvE, 1e-8);
  EXPECT_EQ(FEqual(2.0), kOneMinusInvE);
  EXPECT_NEAR(1.0 - FEqual(0.0), 0.576102, 1e-4);
}

TEST(FEqualTest, MatchesRungeKuttaOracle) {
  for (double l : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9}) {
    EXPECT_NEAR(FEqual(l), RungeKuttaFEqual(l), 1e-9) << "l=" << l;
  }
  EXPECT_NEAR(GammaEqual(), 1.0 - RungeKuttaFEqual(0.0), 1e-9);
}

TEST(FEqualTest, DenominatorStaysAwayFromZero) {
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    EXPECT_GT(2.0 - x - std::exp(-x), 0.3);
  }
}

TEST(FEqualTest, NonDecreasingInUnitRange) {
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double f = FEqual(i / 100.0);
    EXPECT_GE(f, prev - 1e-12);
    EXPECT_GE(f, 0.0);
    EXPECT_LT(f, 1.0);
    prev = f;
  }
}

TEST(FUnequalClosedTest, Values) {
  EXPECT_NEAR(FUnequalClosed(0.0), 0.5 - 0.5 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(GammaUnequalClosed(), 0.56766764, 1e-8);
  EXPECT_NEAR(FUnequalClosed(1.0), kOneMinusInvE, 1e-15);
  EXPECT_EQ(FUnequalClosed(3.0), kOneMinusInvE);
}

TEST(FUnequalClosedTest, SimplestEqualityHolds) {
  for (int i = 0; i <= 1000; ++i) {
    EXPECT_LE(std::abs(SimplestResidualUnequal(i / 1000.0)), 1e-10);
  }
}

TEST(FUnequalClosedTest, ClosedIntegralMatchesSimpson) {
  for (double x : {0.0, 0.3, 1.0, 1.7}) {
    const double oracle =
        Simpson([](double y) { return 1.0 - FUnequalClosed(y); }, 0.0, x);
    // The kink at 1 costs Simpson a little accuracy.
    EXPECT_NEAR(CUnequalClosed(x), oracle, 1e-8) << x;
  }
}

TEST(PotentialTableTest, RejectsBadValues) {
  EXPECT_THROW(PotentialTable(1.0, {0.5, 0.4}, PotentialKind::kConstant),
               std::invalid_argument);
  EXPECT_THROW(PotentialTable(1.0, {0.5, 1.5}, PotentialKind::kConstant),
               std::invalid_argument);
  EXPECT_THROW(PotentialTable(1.0, {NAN, 0.5}, PotentialKind::kConstant),
               std::invalid_argument);
  EXPECT_THROW(PotentialTable(0.0, {0.5, 0.5}, PotentialKind::kConstant),
               std::invalid_argument);
}

TEST(PotentialTableTest, ClosedTablesAgreeWithClosedForms) {
  const PotentialTable eq = PotentialTable::EqualClosed(500);
  const PotentialTable un = PotentialTable::UnequalClosed(500);
  for (int i = 0; i <= eq.intervals(); ++i) {
    EXPECT_NEAR(eq.values()[i], FEqual(eq.x(i)), 1e-8);
    EXPECT_NEAR(un.values()[i], FUnequalClosed(un.x(i)), 1e-8);
  }
  EXPECT_EQ(eq.gamma(), 1.0 - eq.values()[0]);
  EXPECT_NEAR(eq.values().back(), kOneMinusInvE, 1e-8);
  EXPECT_NEAR(un.values().back(), kOneMinusInvE, 1e-12);
}

TEST(PotentialTableTest, IntegralsMatchSimpsonOracle) {
  Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    const PotentialTable f = RandomTable(rng);
    for (double frac : {0.0, 0.13, 0.5, 0.99, 1.4}) {
      const double x = frac * f.upper();
      auto fy = [&](double y) { return f(y); };
      // Simpson over each table cell separately so the kinks sit on panel
      // boundaries and the oracle is accurate.
      auto cellwise = [&](auto integrand) {
        double total = 0.0, a = 0.0;
        while (a < x) {
          double b = std::min(x, (std::floor(a / f.step() + 1e-9) + 1) * f.step());
          if (a >= f.upper()) b = x;
          total += Simpson(integrand, a, b, 64);
          a = b;
        }
        return total;
      };
      EXPECT_NEAR(f.F(x), cellwise(fy), 1e-10);
      EXPECT_NEAR(f.C(x), x - cellwise(fy), 1e-10);
      EXPECT_NEAR(f.Ef(x),
                  cellwise([&](double y) { return std::exp(-y) * fy(y); }),
                  1e-10);
      EXPECT_NEAR(f.E1(x),
                  cellwise([&](double y) { return std::exp(-y) * (1 - fy(y)); }),
                  1e-10);
    }
  }
}

TEST(PotentialTableTest, InverseCRoundTrip) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const PotentialTable f = RandomTable(rng);
    const double x = 2.0 * f.upper() * rng.Uniform();
    const double c = f.C(x);
    const double back = f.InverseC(c);
    EXPECT_NEAR(f.C(back), c, 1e-12);
    EXPECT_LE(back, x + 1e-12);
  }
}

TEST(PotentialTableTest, LastLoadAtMostIsTheSupremum) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const PotentialTable f = RandomTable(rng);
    const double c = f.values()[0] + (f.values().back() - f.values()[0] + 0.02) *
                                         rng.Uniform();
    const double y = f.LastLoadAtMost(c);
    if (c >= f.values().back()) {
      EXPECT_EQ(y, std::numeric_limits<double>::infinity());
      continue;
    }
    ASSERT_TRUE(std::isfinite(y));
    EXPECT_LE(f(y), c + 1e-12);
    EXPECT_GT(f(y + 1e-9), c - 1e-12);
    // Nothing to the right is still at most c.
    for (int k = 1; k <= 20; ++k) {
      EXPECT_GT(f(y + k * f.upper() / 20.0) + 1e-12, c);
    }
  }
  const PotentialTable f = PotentialTable::UnequalClosed(100);
  EXPECT_EQ(f.LastLoadAtMost(0.1), -std::numeric_limits<double>::infinity());
}

TEST(DeEqualTest, ClosedTableHasNonNegativeSlack) {
  const DeAudit audit = CheckDeEqual(PotentialTable::EqualClosed());
  EXPECT_GE(audit.min_slack, -1e-6);
  EXPECT_EQ(audit.cells, 200 * 200);
  EXPECT_EQ(audit.violations, 0);
}

TEST(DeEqualTest, ConstantPotentials) {
  // f = 1 - 1/e only certifies 1/e and is tight at the origin.
  const DeAudit flat =
      CheckDeEqual(PotentialTable::Constant(kOneMinusInvE, 3.0, 10));
  EXPECT_NEAR(flat.min_slack, 0.0, 1e-15);
  EXPECT_EQ(flat.argmin_l, 0.0);
  // Claiming more than the closed form is infeasible.
  EXPECT_LT(CheckDeEqual(PotentialTable::Constant(0.4, 3.0, 10)).min_slack,
            -0.1);
}

TEST(DeEqualTest, ZeroMassRowIsTheLeftHandSide) {
  const PotentialTable f = PotentialTable::EqualClosed(200);
  for (double l : {0.0, 0.5, 2.0}) {
    EXPECT_NEAR(DeEqualSlack(f, l, 0.0), f.Ef(l), 1e-15);
    EXPECT_GE(DeEqualSlack(f, l, 0.0), 0.0);
  }
}

TEST(DeEqualTest, KinkTermMatchesQuadrature) {
  // The z+ term of the equal inequality, by brute-force quadrature.
  const PotentialTable f = PotentialTable::EqualClosed(200);
  for (double l : {0.2, 0.7, 1.5}) {
    for (double p : {0.1, 0.5, 1.0}) {
      const double z = Simpson(
          [&](double t) { return std::exp(-t) * std::max(0.0, p - (l - t)); },
          0.0, l, 200000);
      const double expect =
          f.Ef(l) + (std::exp(-l) * p + z) * (1.0 - f(l)) - f.gamma() * p;
      EXPECT_NEAR(DeEqualSlack(f, l, p), expect, 1e-9);
    }
  }
}

TEST(DeUnequalTest, ClosedTableHasNonNegativeSlack) {
  const DeAudit audit = CheckDeUnequal(PotentialTable::UnequalClosed());
  EXPECT_GE(audit.min_slack, -1e-6);
  EXPECT_EQ(audit.violations, 0);
}

TEST(DeUnequalTest, LeftColumnIsTight) {
  const PotentialTable f = PotentialTable::UnequalClosed();
  for (double p : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(DeUnequalSlack(f, 0.0, p), 0.0, 1e-12);
  }
}

TEST(DeUnequalTest, HalfPotentialIsTightInStdLpMode) {
  const PotentialTable half = PotentialTable::Constant(0.5, 3.0, 30);
  const DeAudit audit = CheckDeUnequal(half, 200, 200, 3.0, DeMode::kStdLp);
  EXPECT_NEAR(audit.min_slack, 0.0, 1e-12);
}

TEST(DeUnequalTest, InnerTermMatchesQuadrature) {
  // inner = int_0^l e^-t (p (1 - f(l)) - int_t^l (1 - f))^+ dt.
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const PotentialTable f = RandomTable(rng);
    const double l = f.upper() * rng.Uniform() * 1.3;
    const double p = rng.Uniform();
    const double m = p * (1.0 - f(l));
    const double inner = Simpson(
        [&](double s) {
          return std::exp(-s) * std::max(0.0, m - (f.C(l) - f.C(s)));
        },
        0.0, l, 200000);
    const double expect =
        f.Ef(l) + std::exp(-l) * m + inner - f.gamma() * p;
    EXPECT_NEAR(DeUnequalSlack(f, l, p), expect, 1e-8);
  }
}

TEST(OdeEqualTest, Residuals) {
  EXPECT_LE(CheckOdeEqual(PotentialTable::EqualClosed()), 1e-6);
  EXPECT_GT(CheckOdeEqual(PotentialTable::Constant(0.5, 2.0, 20)), 1e-3);
  // At l = 1 the equality reads int_0^1 e^-t f + (1/e)(1 - 1/e) = Gamma.
  const PotentialTable f = PotentialTable::EqualClosed();
  EXPECT_NEAR(f.Ef(1.0) + std::exp(-1.0) * (1.0 - std::exp(-1.0)), f.gamma(),
              1e-6);
}

TEST(StdLpAuditTest, HalfPotentialBottomsOutAtOneHalf) {
  const StdLpAudit audit = AuditStdLp(PotentialTable::Constant(0.5, 10.0, 10));
  EXPECT_NEAR(audit.inf_lhs, 0.5, 1e-6);
  EXPECT_NEAR(audit.lhs_at_zero, 0.5, 1e-15);
}

TEST(StdLpAuditTest, EqualClosedFallsBelowItsRatio) {
  const PotentialTable f = PotentialTable::EqualClosed();
  EXPECT_LT(AuditStdLp(f).inf_lhs, 0.576);
}

TEST(BestResponseTest, HalfPotentialGivesShiftedIdentity) {
  const PotentialTable half = PotentialTable::Constant(0.5, 2.0, 400);
  const CutoffTable g = BestResponseG(half);
  ASSERT_EQ(g.intervals(), 400);
  for (int i = 0; i <= 400; ++i) {
    EXPECT_NEAR(g.values[i], std::max(0.0, g.x(i) - 1.0), 1e-9);
  }
  EXPECT_EQ(g.values[0], 0.0);
}

TEST(BestResponseTest, SolvesItsEquationProperty) {
  Rng rng(99);
  for (int t = 0; t < 50; ++t) {
    const PotentialTable f = RandomTable(rng);
    const CutoffTable g = BestResponseG(f);
    g.Validate();
    const double h2 = f.step() * f.step();
    for (int i = 0; i <= g.intervals(); ++i) {
      const double l = g.x(i);
      const double gap = 1.0 - f(l);
      if (gap > f.C(l)) {
        EXPECT_EQ(g.values[i], 0.0);
      } else {
        EXPECT_NEAR(f.C(l) - f.C(g.values[i]), gap, h2 + 1e-12);
      }
    }
  }
}

TEST(OptimizeFTest, IdentityCutoffGivesOneHalf) {
  CutoffTable g{2.0, {}};
  for (int i = 0; i <= 100; ++i) g.values.push_back(2.0 * i / 100);
  FgOptions options;
  options.enforce_right_boundary = false;
  const PotentialTable f = OptimizeFGivenG(g, options);
  EXPECT_NEAR(f.gamma(), 0.5, 1e-9);
}

TEST(OptimizeFTest, FirstIterateIsFeasibleAndPinned) {
  const std::vector<FgIterate> it = IterateFg(2, 200);
  ASSERT_EQ(it.size(), 2u);
  for (int i = 0; i <= it[0].g.intervals(); ++i) {
    EXPECT_NEAR(it[0].g.values[i], std::max(0.0, it[0].g.x(i) - 1.0), 1e-9);
  }
  for (const FgIterate& step : it) {
    const PotentialTable& f = step.f;
    EXPECT_EQ(f.kind(), PotentialKind::kUnequalIterated);
    EXPECT_NEAR(f.values()[0], 1.0 - step.gamma, 1e-9);
    EXPECT_NEAR(f.values().back(), kOneMinusInvE, 1e-9);
    for (double s : RelaxedSlacks(f, step.g)) EXPECT_GE(s, -1e-9);
    // Beats the closed form, stays below the equal-case value.
    EXPECT_GT(step.gamma, GammaUnequalClosed());
    EXPECT_LT(step.gamma, GammaEqual());
  }
  EXPECT_GE(it[1].gamma, it[0].gamma - 1e-12);
  EXPECT_EQ(it[1].f.iteration(), 2);
}

TEST(CsvTest, RoundTripsTwelveDigits) {
  const PotentialTable f = PotentialTable::EqualClosed(50);
  const std::string path =
      (std::filesystem::temp_directory_path() / "stochmatch_f.csv").string();
  WritePotentialCsv(f, path);
  const PotentialTable back = ReadPotentialCsv(path);
  ASSERT_EQ(back.intervals(), 50);
  EXPECT_NEAR(back.upper(), f.upper(), 1e-12);
  for (int i = 0; i <= 50; ++i) {
    EXPECT_NEAR(back.values()[i], f.values()[i], 1e-12);
  }
}

TEST(ExpLinearIntegralTest, MatchesSimpson) {
  const double s = 0.3, t = 1.9, ls = 0.2, lt = 0.8;
  const double oracle = Simpson(
      [&](double y) { return std::exp(-y) * (ls + (lt - ls) * (y - s) / (t - s)); },
      s, t);
  EXPECT_NEAR(ExpLinearIntegral(s, t, ls, lt), oracle, 1e-12);
}

}  // namespace
}  // namespace stochmatch
