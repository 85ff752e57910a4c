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

#include "stochmatch/simulate.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "stochmatch/benchmark.h"
#include "stochmatch/errors.h"
#include "stochmatch/rng.h"

namespace stochmatch {


// Thresholds -----------------------------------------------------------------

std::string ToString(ThresholdLaw law) {
  switch (law) {
    case ThresholdLaw::kExponential: return "exponential";
    case ThresholdLaw::kGeometric: return "geometric";
    case ThresholdLaw::kDeltaEnhanced: return "delta-enhanced";
    case ThresholdLaw::kFixed: return "fixed";
  }
  return "?";
}

ThresholdLaw ParseThresholdLaw(const std::string& name) {
  if (name == "exponential") return ThresholdLaw::kExponential;
  if (name == "geometric") return ThresholdLaw::kGeometric;
  if (name == "delta-enhanced") return ThresholdLaw::kDeltaEnhanced;
  throw std::invalid_argument("unknown threshold law '" + name + "'");
}

ThresholdVector SampleThresholds(int n, ThresholdLaw law, double param,
                                 uint64_t seed, uint64_t trial) {
  if (law == ThresholdLaw::kGeometric && !(param > 0.0 && param <= 1.0)) {
    throw std::invalid_argument("geometric law needs p in (0, 1]");
  }
  if (law == ThresholdLaw::kDeltaEnhanced && !(param >= 0.0)) {
    throw std::invalid_argument("delta-enhanced law needs delta >= 0");
  }
  if (law == ThresholdLaw::kFixed) {
    throw std::invalid_argument("fixed thresholds are not sampled");
  }
  Rng rng(seed, trial, Purpose::kThresholds);
  ThresholdVector out{std::vector<double>(n), law, param};
  const double log_q = law == ThresholdLaw::kGeometric ? std::log1p(-param) : 0;
  for (int u = 0; u < n; ++u) {
    switch (law) {
      case ThresholdLaw::kExponential:
        out.theta[u] = rng.Exponential();
        break;
      case ThresholdLaw::kGeometric: {
        // i - 1 failures before the first success, then a uniform offset.
        double i = 0.0;
        if (param < 1.0) i = std::floor(std::log(rng.UniformPositive()) / log_q);
        out.theta[u] = (i + rng.Uniform()) * param;
        break;
      }
      case ThresholdLaw::kDeltaEnhanced:
        out.theta[u] = param + rng.Exponential();
        break;
      case ThresholdLaw::kFixed:
        break;
    }
  }
  return out;
}

// Monte Carlo ----------------------------------------------------------------

MonteCarloEstimate Summarize(const std::vector<double>& samples,
                             uint64_t seed) {
  MonteCarloEstimate est;
  est.trials = static_cast<int64_t>(samples.size());
  est.seed = seed;
  if (samples.empty()) return est;
  double sum = 0.0;
  for (double s : samples) sum += s;
  est.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double s : samples) ss += (s - est.mean) * (s - est.mean);
    const double n = static_cast<double>(samples.size());
    est.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return est;
}

void ParallelFor(int64_t trials, int workers,
                 const std::function<void(int64_t)>& fn) {
  if (workers <= 0) {
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  workers = static_cast<int>(std::min<int64_t>(workers, std::max<int64_t>(trials, 1)));
  if (workers <= 1) {
    for (int64_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int64_t t = next++; t < trials; t = next++) {
        try {
          fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next = trials;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Coupling -------------------------------------------------------------------

CoupledRun CoupleRewardToBudget(const Instance& inst, Algorithm algo,
                                const PotentialTable& f, uint64_t seed,
                                uint64_t trial) {
  CoupledRun out;
  out.rewards = RunRewardsModel(inst, algo, f, seed, trial);
  const RunTrace& r = out.rewards.trace;
  Rng rng(seed, trial, Purpose::kCoupling);
  out.thresholds = ThresholdVector::Unbounded(inst.num_offline());
  for (int u = 0; u < inst.num_offline(); ++u) {
    out.load_objective += inst.weight(u) * r.loads[u];
    if (!r.successful[u]) continue;
    // Exp(1) conditioned on [l, l + p), by inversion.
    const double l = out.rewards.load_before_success[u];
    const double p = out.rewards.success_p[u];
    const double theta = l - std::log1p(-rng.Uniform() * -std::expm1(-p));
    out.thresholds.theta[u] = std::min(theta, std::nextafter(l + p, l));
    out.reward_objective += inst.weight(u);
    ++out.draws_issued;
  }
  // Candidates in the replay are exactly the vertices the rewards run still
  // considers, so decisions must coincide.
  out.budget = RunIntegralRule(inst, out.thresholds, algo, f);
  out.budget_objective = out.budget.objective;
  for (size_t i = 0; i < r.arrivals.size(); ++i) {
    if (r.arrivals[i].matched_to != out.budget.arrivals[i].matched_to) {
      out.decisions_match = false;
    }
  }
  return out;
}

// Rounding -------------------------------------------------------------------

double DefaultDelta(double p_max, int n_offline, double constant) {
  return constant * std::cbrt(p_max) * std::log(std::max(n_offline, 2));
}

RoundingRun RoundFractionalToIntegral(const Instance& inst,
                                      const PotentialTable& f, double delta,
                                      uint64_t seed, uint64_t trial,
                                      bool record_history) {
  if (!(delta > 0.0)) throw std::invalid_argument("rounding needs delta > 0");
  const int n = inst.num_offline();
  RoundingRun out;
  out.theta = SampleThresholds(n, ThresholdLaw::kExponential, 0.0, seed, trial)
                  .theta;
  ThresholdVector enhanced{out.theta, ThresholdLaw::kDeltaEnhanced, delta};
  for (double& t : enhanced.theta) t += delta;
  out.fractional = RunFractional(inst, enhanced, f);

  Rng rng(seed, trial, Purpose::kRounding);
  std::vector<double> la(n, 0.0);
  out.integral_loads.assign(n, 0.0);
  std::vector<double>& lb = out.integral_loads;
  out.max_drift.assign(n, 0.0);
  for (const ArrivalRecord& rec : out.fractional.arrivals) {
    for (size_t i = 0; i < rec.fractions.size(); ++i) {
      la[rec.fractions[i].first] = rec.load_after[i];
    }
    const double draw = rng.Uniform();
    double cum = 0.0;
    for (const auto& [u, x] : rec.fractions) {
      cum += x;
      if (draw < cum) {
        lb[u] += *inst.probability(u, rec.arrival);
        break;
      }
    }
    for (const auto& [u, x] : rec.fractions) {
      const double drift = la[u] - lb[u];
      out.max_drift[u] = std::max(out.max_drift[u], drift);
      if (drift > delta && !out.failed) {
        out.failed = true;
        out.first_failure = rec.arrival;
      }
    }
    if (record_history) {
      out.fractional_history.push_back(la);
      out.integral_history.push_back(lb);
    }
  }
  for (int u = 0; u < n; ++u) {
    out.fractional_objective += inst.weight(u) * la[u];
    out.integral_objective += inst.weight(u) * std::min(lb[u], out.theta[u]);
  }
  return out;
}

double MaxDriftCheck(const std::vector<double>& a,
                     const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("drift check: paths differ in length");
  }
  double best = 0.0;
  for (size_t i = 0; i < a.size(); ++i) best = std::max(best, a[i] - b[i]);
  return best;
}

double MaximalBernsteinBound(double t, double a, double m) {
  const double denom = 4.0 * a * t + m;
  if (denom <= 0.0) return t > 0.0 ? 0.0 : 2.0;
  return 2.0 * std::exp(-t * t / denom);
}

// Experiments ----------------------------------------------------------------

std::string ToString(Model model) {
  switch (model) {
    case Model::kBudget: return "budget";
    case Model::kRewards: return "rewards";
    case Model::kRounded: return "rounded";
  }
  return "?";
}

Model ParseModel(const std::string& name) {
  if (name == "budget") return Model::kBudget;
  if (name == "rewards") return Model::kRewards;
  if (name == "rounded") return Model::kRounded;
  throw std::invalid_argument("unknown model '" + name + "'");
}

TrialOutcome RunTrial(const Instance& inst, const ExperimentConfig& config,
                      const PotentialTable& f, int64_t trial) {
  TrialOutcome out;
  switch (config.model) {
    case Model::kBudget: {
      const ThresholdVector th = SampleThresholds(
          inst.num_offline(), config.law, config.law_param, config.seed, trial);
      const RunTrace t = RunBudgetModel(inst, th, config.algorithm, f,
                                        {.record_arrivals = false});
      out.objective = t.objective;
      out.identity_error = t.max_identity_error;
      break;
    }
    case Model::kRewards:
      out.objective =
          RunRewardsModel(inst, config.algorithm, f, config.seed, trial)
              .trace.objective;
      break;
    case Model::kRounded: {
      const double delta = config.delta > 0.0
                               ? config.delta
                               : DefaultDelta(inst.p_max(), inst.num_offline());
      const RoundingRun r =
          RoundFractionalToIntegral(inst, f, delta, config.seed, trial);
      out.objective = r.integral_objective;
      out.identity_error = r.fractional.max_identity_error;
      out.failed = r.failed;
      break;
    }
  }
  return out;
}

RatioEstimate EstimateRatio(const Instance& inst, const ExperimentConfig& config,
                            const PotentialTable& f, double opt) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  RatioEstimate est;
  est.opt = opt > 0.0 ? opt : StdLpOpt(inst);
  if (!(est.opt > 0.0)) {
    throw std::runtime_error("StdLP optimum is zero; ratio undefined");
  }
  std::vector<TrialOutcome> outcomes(config.trials);
  ParallelFor(config.trials, config.workers, [&](int64_t t) {
    outcomes[t] = RunTrial(inst, config, f, t);
  });
  std::vector<double> ratios;
  ratios.reserve(outcomes.size());
  for (const TrialOutcome& o : outcomes) {
    est.objectives.push_back(o.objective);
    ratios.push_back(o.objective / est.opt);
    est.max_identity_error = std::max(est.max_identity_error, o.identity_error);
    est.rounding_failures += o.failed;
  }
  est.ratio = Summarize(ratios, config.seed);
  est.objective = Summarize(est.objectives, config.seed);
  return est;
}

ExperimentFile ReadExperimentFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": byte " + std::to_string(e.byte),
                     "malformed JSON");
  }
  if (!j.is_object()) throw ParseError(path, "expected an object");
  ExperimentFile out;
  auto str = [&](const char* key, std::string fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ParseError(std::string("$.") + key, "expected a string");
    return j[key].get<std::string>();
  };
  auto num = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ParseError(std::string("$.") + key, "expected a number");
    return j[key].get<double>();
  };
  out.instance = str("instance", "");
  if (out.instance.empty()) throw ParseError("$.instance", "missing field");
  std::filesystem::path inst_path(out.instance);
  if (inst_path.is_relative()) {
    out.instance =
        (std::filesystem::path(path).parent_path() / inst_path).string();
  }
  out.potential = str("potential", "equal");
  ExperimentConfig& c = out.config;
  c.algorithm = ParseAlgorithm(str("algorithm", "sb"));
  c.model = ParseModel(str("model", "budget"));
  c.law = ParseThresholdLaw(str("law", "exponential"));
  c.law_param = num("law_param", 0.0);
  c.trials = static_cast<int64_t>(num("trials", 1000));
  c.seed = static_cast<uint64_t>(num("seed", 1));
  c.delta = num("delta", -1.0);
  c.workers = static_cast<int>(num("workers", 0));
  return out;
}

PotentialTable LoadPotential(const std::string& spec) {
  if (spec == "equal") return PotentialTable::EqualClosed();
  if (spec == "unequal-closed") return PotentialTable::UnequalClosed();
  if (spec.rfind("constant:", 0) == 0) {
    return PotentialTable::Constant(std::stod(spec.substr(9)));
  }
  return ReadPotentialCsv(spec);
}

void WriteResultsCsv(const RatioEstimate& est, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char buf[256];
  out << "trial,objective,opt,ratio\n";
  for (size_t t = 0; t < est.objectives.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g,%.12g\n", t,
                  est.objectives[t], est.opt, est.objectives[t] / est.opt);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "mean,%.12g,%.12g,%.12g\nse,%.12g,,%.12g\n",
                est.objective.mean, est.opt, est.ratio.mean, est.objective.se,
                est.ratio.se);
  out << buf;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace stochmatch
