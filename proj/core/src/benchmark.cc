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

#include "stochmatch/benchmark.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "stochmatch/rng.h"
#include "stochmatch/simulate.h"

namespace stochmatch {

StdLp BuildStdLp(const Instance& inst, bool aggregate) {
  // Class key: the sorted (u, p) list of an arrival's edges.
  std::map<std::vector<std::pair<int, double>>, int> class_of;
  std::vector<int> multiplicity;
  std::vector<int> representative;
  for (int v = 0; v < inst.num_online(); ++v) {
    std::vector<std::pair<int, double>> key;
    for (const Edge& e : inst.online_edges(v)) key.emplace_back(e.u, e.p);
    if (key.empty()) continue;
    if (aggregate) {
      auto [it, inserted] =
          class_of.emplace(std::move(key), static_cast<int>(multiplicity.size()));
      if (!inserted) {
        ++multiplicity[it->second];
        continue;
      }
    }
    multiplicity.push_back(1);
    representative.push_back(v);
  }

  StdLp out;
  out.num_classes = static_cast<int>(multiplicity.size());
  std::vector<double> col_p;
  for (int c = 0; c < out.num_classes; ++c) {
    for (const Edge& e : inst.online_edges(representative[c])) {
      out.column_u.push_back(e.u);
      out.column_class.push_back(c);
      col_p.push_back(e.p);
    }
  }
  const int n = static_cast<int>(out.column_u.size());
  out.problem = LpProblem(n);
  for (int j = 0; j < n; ++j) {
    out.problem.objective[j] = inst.weight(out.column_u[j]) * col_p[j];
  }
  // x_uv <= 1 is implied by the class rows.
  std::vector<std::vector<double>> capacity(inst.num_offline(),
                                            std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> demand(out.num_classes,
                                          std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    capacity[out.column_u[j]][j] = col_p[j];
    demand[out.column_class[j]][j] = 1.0;
  }
  for (int u = 0; u < inst.num_offline(); ++u) {
    if (inst.offline_edges(u).empty()) continue;
    out.problem.AddRow(std::move(capacity[u]), RowSense::kLessEqual, 1.0);
  }
  for (int c = 0; c < out.num_classes; ++c) {
    out.problem.AddRow(std::move(demand[c]), RowSense::kLessEqual,
                       multiplicity[c]);
  }
  return out;
}

double StdLpOpt(const Instance& inst, bool aggregate) {
  const StdLp lp = BuildStdLp(inst, aggregate);
  if (lp.problem.num_variables() == 0) return 0.0;
  return SimplexSolve(lp.problem).objective;
}

double ConfigLpOptBruteforce(const Instance& inst, int max_neighbors) {
  struct Column {
    int u;
    std::vector<int> subset;
    double value;
  };
  std::vector<Column> columns;
  for (int u = 0; u < inst.num_offline(); ++u) {
    const auto edges = inst.offline_edges(u);
    const int d = static_cast<int>(edges.size());
    if (d > max_neighbors) {
      throw std::invalid_argument(
          "config LP: offline '" + inst.offline_id(u) + "' has " +
          std::to_string(d) + " neighbors, limit " +
          std::to_string(max_neighbors));
    }
    for (uint32_t mask = 1; mask < (1u << d); ++mask) {
      Column c{u, {}, 0.0};
      double mass = 0.0;
      for (int i = 0; i < d; ++i) {
        if (mask >> i & 1u) {
          c.subset.push_back(edges[i].v);
          mass += edges[i].p;
        }
      }
      c.value = inst.weight(u) * std::min(mass, 1.0);
      columns.push_back(std::move(c));
    }
  }
  if (columns.empty()) return 0.0;
  const int n = static_cast<int>(columns.size());
  LpProblem lp(n);
  std::vector<std::vector<double>> per_u(inst.num_offline(),
                                         std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> per_v(inst.num_online(),
                                         std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = columns[j].value;
    per_u[columns[j].u][j] = 1.0;
    for (int v : columns[j].subset) per_v[v][j] = 1.0;
  }
  for (auto& row : per_u) {
    if (std::any_of(row.begin(), row.end(), [](double x) { return x != 0; })) {
      lp.AddRow(std::move(row), RowSense::kLessEqual, 1.0);
    }
  }
  for (auto& row : per_v) {
    if (std::any_of(row.begin(), row.end(), [](double x) { return x != 0; })) {
      lp.AddRow(std::move(row), RowSense::kLessEqual, 1.0);
    }
  }
  return SimplexSolve(lp).objective;
}

// Audit ----------------------------------------------------------------------

namespace {

std::vector<AuditPair> SamplePairs(const Instance& inst, int count,
                                   uint64_t seed) {
  std::vector<int> us;
  for (int u = 0; u < inst.num_offline(); ++u) {
    if (!inst.offline_edges(u).empty() && inst.weight(u) > 0.0) us.push_back(u);
  }
  std::vector<AuditPair> out;
  if (us.empty() || count <= 0) return out;
  std::set<std::pair<int, std::vector<int>>> seen;
  auto add = [&](int u, std::vector<int> s, const char* kind) {
    std::sort(s.begin(), s.end());
    if (s.empty() || !seen.insert({u, s}).second) return;
    AuditPair p;
    p.u = u;
    p.subset = std::move(s);
    p.kind = kind;
    p.p_us = NeighborMass(inst, u, p.subset);
    out.push_back(std::move(p));
  };

  // Structured suspects.
  const int structured = (count + 1) / 2;
  for (size_t i = 0; static_cast<int>(out.size()) < structured &&
                     i < 3 * us.size();
       ++i) {
    const int u = us[i % us.size()];
    const auto edges = inst.offline_edges(u);
    std::vector<int> s;
    switch (i / us.size()) {
      case 0:
        for (const Edge& e : edges) s.push_back(e.v);
        add(u, s, "full");
        break;
      case 1: {
        std::vector<Edge> sorted(edges.begin(), edges.end());
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Edge& a, const Edge& b) { return a.p > b.p; });
        double mass = 0.0;
        for (const Edge& e : sorted) {
          if (mass >= 1.0) break;
          s.push_back(e.v);
          mass += e.p;
        }
        add(u, s, "top-p");
        break;
      }
      default: {
        double mass = 0.0;
        for (auto it = edges.rbegin(); it != edges.rend() && mass < 1.0; ++it) {
          s.push_back(it->v);
          mass += it->p;
        }
        add(u, s, "latest");
        break;
      }
    }
  }

  Rng rng(seed, 0, Purpose::kSubsets);
  for (int attempt = 0;
       static_cast<int>(out.size()) < count && attempt < 20 * count;
       ++attempt) {
    const int u = us[rng.Below(us.size())];
    const auto edges = inst.offline_edges(u);
    std::vector<int> pool;
    for (const Edge& e : edges) pool.push_back(e.v);
    const size_t k = 1 + rng.Below(pool.size());
    for (size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + rng.Below(pool.size() - i)]);
    }
    pool.resize(k);
    add(u, pool, "random");
  }
  return out;
}

}  // namespace

AuditReport AuditDualFeasibility(const Instance& inst, const PotentialTable& f,
                                 const AuditConfig& config) {
  if (config.trials < 2) throw std::invalid_argument("audit needs >= 2 trials");
  AuditReport report;
  report.mode = config.mode;
  report.gamma = config.gamma >= 0.0 ? config.gamma : f.gamma();
  report.tolerance = config.tolerance;
  std::vector<AuditPair> pairs = SamplePairs(inst, config.pairs, config.seed);
  for (const AuditPair& p : pairs) {
    if (p.p_us > 0.0) report.pairs.push_back(p);
    else ++report.excluded_zero_mass;
  }
  const int np = static_cast<int>(report.pairs.size());
  const int n = inst.num_offline();
  const int64_t trials = config.trials;
  auto pair_value = [&](const RunTrace& t, const AuditPair& p) {
    double s = t.alpha[p.u];
    for (int v : p.subset) s += t.beta[v];
    return s;
  };

  // values[t * np + i]: sample t of pair i.
  std::vector<double> values(static_cast<size_t>(trials) * np, 0.0);
  std::vector<double> identity;
  const RunOptions opts{.record_arrivals = false};
  if (config.mode == AuditMode::kUnconditional) {
    identity.assign(trials, 0.0);
    ParallelFor(trials, config.workers, [&](int64_t t) {
      const ThresholdVector th = SampleThresholds(
          n, config.law, config.law_param, config.seed, t);
      const RunTrace run = RunBudgetModel(inst, th, config.algorithm, f, opts);
      identity[t] = run.max_identity_error;
      for (int i = 0; i < np; ++i) {
        values[t * np + i] = pair_value(run, report.pairs[i]);
      }
    });
    report.runs = trials;
  } else {
    identity.assign(static_cast<size_t>(trials) * np, 0.0);
    ParallelFor(trials * np, config.workers, [&](int64_t job) {
      const int i = static_cast<int>(job % np);
      const int64_t t = job / np;
      const AuditPair& p = report.pairs[i];
      const uint64_t pair_seed = DeriveSeed(config.seed, i, Purpose::kAudit);
      // theta_-u is shared by all trials of the pair; theta_u is redrawn.
      ThresholdVector th = SampleThresholds(n, config.law, config.law_param,
                                            pair_seed, 0);
      th.theta[p.u] = SampleThresholds(1, config.law, config.law_param,
                                       pair_seed, 1 + t)
                          .theta[0];
      const RunTrace run = RunBudgetModel(inst, th, config.algorithm, f, opts);
      identity[job] = run.max_identity_error;
      values[t * np + i] = pair_value(run, p);
    });
    report.runs = trials * np;
  }
  for (double e : identity) {
    report.max_identity_error = std::max(report.max_identity_error, e);
  }

  report.min_ratio = kInfinity;
  report.min_margin = kInfinity;
  std::vector<double> samples(trials);
  for (int i = 0; i < np; ++i) {
    AuditPair& p = report.pairs[i];
    for (int64_t t = 0; t < trials; ++t) samples[t] = values[t * np + i];
    const MonteCarloEstimate est = Summarize(samples, config.seed);
    const double scale = inst.weight(p.u) * p.p_us;
    p.est = est.mean;
    p.se = est.se;
    p.ratio = est.mean / scale;
    p.ratio_se = est.se / scale;
    const double margin =
        p.ratio - (report.gamma - report.tolerance - 3.0 * p.ratio_se);
    p.violated = margin < 0.0;
    report.violations += p.violated;
    report.min_margin = std::min(report.min_margin, margin);
    if (p.ratio < report.min_ratio) {
      report.min_ratio = p.ratio;
      report.argmin = i;
    }
  }
  return report;
}

void WriteAuditCsv(const Instance& inst, const AuditReport& report,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "u,S_size,p_uS,est,se,ratio\n";
  char buf[256];
  for (const AuditPair& p : report.pairs) {
    std::snprintf(buf, sizeof(buf), ",%zu,%.12g,%.12g,%.12g,%.12g\n",
                  p.subset.size(), p.p_us, p.est, p.se, p.ratio);
    out << inst.offline_id(p.u) << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void PrintAuditSummary(const Instance& inst, const AuditReport& report,
                       std::ostream& os) {
  char buf[512];
  os << "dual feasibility audit ("
     << (report.mode == AuditMode::kUnconditional ? "unconditional"
                                                  : "conditional")
     << ")\n";
  std::snprintf(buf, sizeof(buf),
                "  pairs           %zu (excluded with zero mass: %d)\n"
                "  runs            %lld\n"
                "  declared gamma  %.6f, tolerance %.4f + 3 SE\n",
                report.pairs.size(), report.excluded_zero_mass,
                static_cast<long long>(report.runs), report.gamma,
                report.tolerance);
  os << buf;
  if (report.argmin >= 0) {
    const AuditPair& p = report.pairs[report.argmin];
    std::snprintf(buf, sizeof(buf),
                  "  min ratio       %.6f (se %.6f) at u=%s |S|=%zu kind=%s\n"
                  "  min margin      %.6f\n",
                  report.min_ratio, p.ratio_se, inst.offline_id(p.u).c_str(),
                  p.subset.size(), p.kind.c_str(), report.min_margin);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  violations      %d\n  max |primal - dual| per run %.3g\n",
                report.violations, report.max_identity_error);
  os << buf;
}

}  // namespace stochmatch
