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

#include "stochmatch/algorithms.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "stochmatch/rng.h"

namespace stochmatch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTauTolerance = 1e-12;
constexpr double kSumTolerance = 1e-10;
constexpr double kSnap = 1e-12;

void RequireEqual(const Instance& inst, const char* who) {
  if (!inst.equal_probabilities()) {
    throw std::invalid_argument(std::string(who) +
                                " requires equal edge probabilities");
  }
}

void RequireSize(const Instance& inst, const ThresholdVector& th) {
  if (static_cast<int>(th.theta.size()) != inst.num_offline()) {
    throw std::invalid_argument("threshold vector size does not match instance");
  }
}

// Index into inst.online_edges(v) of the chosen neighbor, or -1.
template <typename Active>
int Select(Algorithm algo, const Instance& inst, int v,
           const std::vector<double>& loads, const PotentialTable* f,
           Active active) {
  const auto edges = inst.online_edges(v);
  int best = -1;
  double best_score = 0.0;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const Edge& e = edges[i];
    if (!active(e.u)) continue;
    if (best < 0) {
      best = i;
      if (algo == Algorithm::kWeighted) {
        best_score = inst.weight(e.u) * e.p * (1.0 - (*f)(loads[e.u]));
      } else if (algo == Algorithm::kGreedy) {
        best_score = inst.weight(e.u) * e.p;
      }
      continue;
    }
    const Edge& b = edges[best];
    const bool lex_smaller = inst.lex_rank(e.u) < inst.lex_rank(b.u);
    bool better = false;
    switch (algo) {
      case Algorithm::kStochasticBalance:
        better = loads[e.u] < loads[b.u] ||
                 (loads[e.u] == loads[b.u] && lex_smaller);
        break;
      case Algorithm::kWeighted: {
        const double s = inst.weight(e.u) * e.p * (1.0 - (*f)(loads[e.u]));
        if (s != best_score) {
          better = s > best_score;
        } else {
          better = loads[e.u] < loads[b.u] ||
                   (loads[e.u] == loads[b.u] && lex_smaller);
        }
        if (better) best_score = s;
        break;
      }
      case Algorithm::kGreedy: {
        const double s = inst.weight(e.u) * e.p;
        better = s > best_score || (s == best_score && lex_smaller);
        if (better) best_score = s;
        break;
      }
      case Algorithm::kFractional:
        throw std::logic_error("Select: fractional is not an integral rule");
    }
    if (better) best = i;
  }
  return best;
}

RunTrace InitTrace(const Instance& inst, Algorithm algo) {
  RunTrace t;
  t.algorithm = algo;
  t.loads.assign(inst.num_offline(), 0.0);
  t.alpha.assign(inst.num_offline(), 0.0);
  t.beta.assign(inst.num_online(), 0.0);
  t.successful.assign(inst.num_offline(), false);
  return t;
}

RunTrace RunIntegral(const Instance& inst, const ThresholdVector& th,
                     Algorithm algo, const PotentialTable& f,
                     const RunOptions& options) {
  RequireSize(inst, th);
  RunTrace t = InitTrace(inst, algo);
  const std::vector<double>& theta = th.theta;
  double alpha_total = 0.0, beta_total = 0.0, primal_total = 0.0;
  for (int v = 0; v < inst.num_online(); ++v) {
    const int pick =
        Select(algo, inst, v, t.loads, &f,
               [&](int u) { return t.loads[u] < theta[u]; });
    ArrivalRecord rec;
    rec.arrival = v;
    if (pick >= 0) {
      const Edge& e = inst.online_edges(v)[pick];
      const double w = inst.weight(e.u);
      const double l = t.loads[e.u];
      const double gain = std::min(e.p, theta[e.u] - l);
      const double d_alpha = w * (f.F(l + gain) - f.F(l));
      const double primal = w * gain;
      const double beta = primal - d_alpha;
      t.alpha[e.u] += d_alpha;
      t.beta[v] = beta;
      t.loads[e.u] = l + e.p;
      if (t.loads[e.u] >= theta[e.u]) t.successful[e.u] = true;
      alpha_total += d_alpha;
      beta_total += beta;
      primal_total += primal;
      rec.matched_to = e.u;
      rec.load_after.push_back(t.loads[e.u]);
      rec.beta = beta;
      rec.primal_gain = primal;
    }
    rec.alpha_total = alpha_total;
    rec.primal_total = primal_total;
    t.max_identity_error =
        std::max(t.max_identity_error,
                 std::abs(primal_total - (alpha_total + beta_total)));
    if (options.record_arrivals) t.arrivals.push_back(std::move(rec));
    if (options.record_load_history) t.load_history.push_back(t.loads);
  }
  t.objective = primal_total;
  return t;
}

}  // namespace

std::string ToString(Algorithm algo) {
  switch (algo) {
    case Algorithm::kStochasticBalance: return "sb";
    case Algorithm::kWeighted: return "weighted";
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kFractional: return "fractional";
  }
  return "?";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "sb") return Algorithm::kStochasticBalance;
  if (name == "weighted") return Algorithm::kWeighted;
  if (name == "greedy") return Algorithm::kGreedy;
  if (name == "fractional") return Algorithm::kFractional;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

bool IsIntegral(Algorithm algo) { return algo != Algorithm::kFractional; }

const PotentialTable& DefaultEqualPotential() {
  static const PotentialTable table = PotentialTable::EqualClosed();
  return table;
}

RunTrace RunStochasticBalance(const Instance& inst, const ThresholdVector& th,
                              const RunOptions& options) {
  RequireEqual(inst, "stochastic balance");
  return RunIntegral(inst, th, Algorithm::kStochasticBalance,
                     DefaultEqualPotential(), options);
}

RunTrace RunWeightedOrderBased(const Instance& inst, const ThresholdVector& th,
                               const PotentialTable& f,
                               const RunOptions& options) {
  RequireEqual(inst, "weighted order-based");
  return RunIntegral(inst, th, Algorithm::kWeighted, f, options);
}

RunTrace RunGreedy(const Instance& inst, const ThresholdVector& th,
                   const PotentialTable& f, const RunOptions& options) {
  return RunIntegral(inst, th, Algorithm::kGreedy, f, options);
}

std::vector<std::pair<int, double>> FractionalStep(
    const Instance& inst, int v, const std::vector<double>& loads,
    const std::vector<double>& theta, const PotentialTable& f) {
  struct Cand {
    int u;
    double p, wp, load, cap;
  };
  std::vector<Cand> cands;
  double max_wp = 0.0;
  for (const Edge& e : inst.online_edges(v)) {
    const double l = loads[e.u];
    if (!(l < theta[e.u])) continue;
    const double cap = std::min(1.0, (theta[e.u] - l) / e.p);
    const double wp = inst.weight(e.u) * e.p;
    cands.push_back({e.u, e.p, wp, l, cap});
    max_wp = std::max(max_wp, wp);
  }
  std::vector<std::pair<int, double>> out;
  if (cands.empty()) return out;

  // x_u(tau): the largest fraction keeping w p (1 - f(l + p x)) >= tau.
  auto fill = [&](double tau, std::vector<double>& x) {
    double sum = 0.0;
    for (size_t i = 0; i < cands.size(); ++i) {
      const Cand& c = cands[i];
      double xi;
      if (tau <= 0.0) {
        xi = c.cap;
      } else if (c.wp <= 0.0) {
        xi = 0.0;
      } else {
        const double y = f.LastLoadAtMost(1.0 - tau / c.wp);
        xi = y == kInf ? c.cap : std::clamp((y - c.load) / c.p, 0.0, c.cap);
      }
      x[i] = xi;
      sum += xi;
    }
    return sum;
  };

  std::vector<double> x(cands.size()), x_lo(cands.size()), x_hi(cands.size());
  if (fill(0.0, x) > 1.0) {
    double lo = 0.0, hi = max_wp + 1.0;
    x_lo = x;
    fill(hi, x_hi);
    while (hi - lo > kTauTolerance) {
      const double mid = 0.5 * (lo + hi);
      const double s = fill(mid, x);
      if (s >= 1.0) {
        lo = mid;
        x_lo = x;
      } else {
        hi = mid;
        x_hi = x;
      }
      if (s <= 1.0 && s >= 1.0 - kSumTolerance) break;
    }
    // Whatever the upper side leaves goes to the vertices that jump between
    // the bracket ends, split equally and capped by their lower-side value.
    x = x_hi;
    double rest = 1.0;
    for (double xi : x) rest -= xi;
    std::vector<size_t> open;
    for (size_t i = 0; i < x.size(); ++i) {
      if (x_lo[i] > x[i]) open.push_back(i);
    }
    while (rest > 0.0 && !open.empty()) {
      const double share = rest / static_cast<double>(open.size());
      std::vector<size_t> still;
      for (size_t i : open) {
        const double add = std::min(share, x_lo[i] - x[i]);
        x[i] += add;
        rest -= add;
        if (x_lo[i] - x[i] > 0.0) still.push_back(i);
      }
      if (still.size() == open.size()) break;
      open.swap(still);
    }
  }
  for (size_t i = 0; i < cands.size(); ++i) {
    if (x[i] > 0.0) out.emplace_back(cands[i].u, x[i]);
  }
  return out;
}

RunTrace RunFractional(const Instance& inst, const ThresholdVector& th,
                       const PotentialTable& f, const RunOptions& options) {
  RequireSize(inst, th);
  RunTrace t = InitTrace(inst, Algorithm::kFractional);
  const std::vector<double>& theta = th.theta;
  double alpha_total = 0.0, beta_total = 0.0, primal_total = 0.0;
  for (int v = 0; v < inst.num_online(); ++v) {
    ArrivalRecord rec;
    rec.arrival = v;
    rec.fractions = FractionalStep(inst, v, t.loads, theta, f);
    double beta = 0.0, primal = 0.0;
    for (const auto& [u, xu] : rec.fractions) {
      const double w = inst.weight(u);
      const double l = t.loads[u];
      double next = l + xu * *inst.probability(u, v);
      if (next >= theta[u] - kSnap) next = theta[u];
      const double d_alpha = w * (f.F(next) - f.F(l));
      const double d_beta = w * (f.C(next) - f.C(l));
      t.alpha[u] += d_alpha;
      alpha_total += d_alpha;
      beta += d_beta;
      primal += w * (next - l);
      t.loads[u] = next;
      if (next >= theta[u]) t.successful[u] = true;
      rec.load_after.push_back(next);
    }
    t.beta[v] = beta;
    beta_total += beta;
    primal_total += primal;
    rec.alpha_total = alpha_total;
    rec.beta = beta;
    rec.primal_gain = primal;
    rec.primal_total = primal_total;
    t.max_identity_error =
        std::max(t.max_identity_error,
                 std::abs(primal_total - (alpha_total + beta_total)));
    if (options.record_arrivals) t.arrivals.push_back(std::move(rec));
    if (options.record_load_history) t.load_history.push_back(t.loads);
  }
  t.objective = primal_total;
  return t;
}

RunTrace RunIntegralRule(const Instance& inst, const ThresholdVector& th,
                         Algorithm algo, const PotentialTable& f,
                         const RunOptions& options) {
  if (!IsIntegral(algo)) {
    throw std::invalid_argument("RunIntegralRule needs an integral algorithm");
  }
  return RunIntegral(inst, th, algo,
                     algo == Algorithm::kStochasticBalance
                         ? DefaultEqualPotential()
                         : f,
                     options);
}

RunTrace RunBudgetModel(const Instance& inst, const ThresholdVector& th,
                        Algorithm algo, const PotentialTable& f,
                        const RunOptions& options) {
  switch (algo) {
    case Algorithm::kStochasticBalance:
      return RunStochasticBalance(inst, th, options);
    case Algorithm::kWeighted:
      return RunWeightedOrderBased(inst, th, f, options);
    case Algorithm::kGreedy:
      return RunGreedy(inst, th, f, options);
    case Algorithm::kFractional:
      return RunFractional(inst, th, f, options);
  }
  throw std::logic_error("RunBudgetModel: bad algorithm");
}

RewardsRun RunRewardsModel(const Instance& inst, Algorithm algo,
                           const PotentialTable& f, uint64_t seed,
                           uint64_t trial) {
  if (!IsIntegral(algo)) {
    throw std::invalid_argument("rewards model needs an integral algorithm");
  }
  Rng rng(seed, trial, Purpose::kRewards);
  RewardsRun out;
  RunTrace& t = out.trace;
  t = InitTrace(inst, algo);
  t.rewards_model = true;
  out.load_before_success.assign(inst.num_offline(), 0.0);
  out.success_p.assign(inst.num_offline(), 0.0);
  double primal_total = 0.0;
  for (int v = 0; v < inst.num_online(); ++v) {
    const int pick = Select(algo, inst, v, t.loads, &f,
                            [&](int u) { return !t.successful[u]; });
    ArrivalRecord rec;
    rec.arrival = v;
    if (pick >= 0) {
      const Edge& e = inst.online_edges(v)[pick];
      rec.matched_to = e.u;
      if (rng.Bernoulli(e.p)) {
        t.successful[e.u] = true;
        out.load_before_success[e.u] = t.loads[e.u];
        out.success_p[e.u] = e.p;
        rec.success = true;
        rec.primal_gain = inst.weight(e.u);
        primal_total += rec.primal_gain;
      }
      t.loads[e.u] += e.p;
      rec.load_after.push_back(t.loads[e.u]);
    }
    rec.primal_total = primal_total;
    t.arrivals.push_back(std::move(rec));
  }
  t.objective = primal_total;
  return out;
}

void WriteTraceCsv(const Instance& inst, const RunTrace& trace,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
  };
  out << "arrival_id,matched_to,load_after,alpha_total,beta_v\n";
  for (const ArrivalRecord& r : trace.arrivals) {
    std::string matched, loads;
    if (!r.fractions.empty()) {
      for (size_t i = 0; i < r.fractions.size(); ++i) {
        if (i) {
          matched += ';';
          loads += ';';
        }
        matched += inst.offline_id(r.fractions[i].first) + ":" +
                   num(r.fractions[i].second);
        loads += num(r.load_after[i]);
      }
    } else if (r.matched_to >= 0) {
      matched = inst.offline_id(r.matched_to);
      loads = num(r.load_after[0]);
    }
    out << inst.online_id(r.arrival) << ',' << matched << ',' << loads << ','
        << num(r.alpha_total) << ',' << num(r.beta) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace stochmatch
