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

// stochmatch command-line tool. Every subcommand writes
// <out-dir>/manifest-<subcommand>.json next to its artifacts, including runs
// that end in an error after flag parsing.
//
// Exit codes: 0 success, 1 a checked invariant or audit failed, 2 hard error
// (I/O, parse, validation), CLI11 codes for usage errors.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochmatch/algorithms.h"
#include "stochmatch/benchmark.h"
#include "stochmatch/errors.h"
#include "stochmatch/instance.h"
#include "stochmatch/potential.h"
#include "stochmatch/report.h"
#include "stochmatch/simulate.h"
#include "stochmatch/thresholds.h"

namespace stochmatch {
namespace {

namespace fs = std::filesystem;
using Summary = std::vector<std::pair<std::string, std::string>>;

struct Globals {
  uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "csv";
  int workers = 0;
};

class Context {
 public:
  Context(const Globals& g, CLI::App* sub) : globals_(g), sub_(sub) {
    fs::create_directories(g.out_dir);
  }

  std::string Path(const std::string& name) const {
    return (fs::path(globals_.out_dir) / name).string();
  }
  void Artifact(const std::string& path) { artifacts_.push_back(path); }

  // summary.csv (key,value rows) or summary.json, per --format.
  void WriteSummary(const Summary& rows) {
    std::string path;
    if (globals_.format == "json") {
      nlohmann::ordered_json j;
      for (const auto& [k, v] : rows) j[k] = v;
      path = Path("summary-" + sub_->get_name() + ".json");
      WriteTextFile(path, j.dump(2) + "\n");
    } else {
      std::string text = "key,value\n";
      for (const auto& [k, v] : rows) text += k + "," + v + "\n";
      path = Path("summary-" + sub_->get_name() + ".csv");
      WriteTextFile(path, text);
    }
    Artifact(path);
  }

  void WriteManifest(int exit_code) const {
    Manifest m;
    m.command = sub_->get_name();
    m.seed = globals_.seed;
    m.exit_code = exit_code;
    m.artifacts = artifacts_;
    m.config = {{"out-dir", globals_.out_dir},
                {"format", globals_.format},
                {"workers", std::to_string(globals_.workers)}};
    for (const CLI::Option* opt : sub_->get_options()) {
      if (opt->get_name() == "--help") continue;
      std::string value;
      if (opt->count() > 0) {
        const std::vector<std::string>& res = opt->results();
        for (size_t i = 0; i < res.size(); ++i) value += (i ? ";" : "") + res[i];
      } else {
        value = opt->get_default_str();
      }
      std::string name = opt->get_name();
      while (!name.empty() && name[0] == '-') name.erase(0, 1);
      m.config.emplace_back(name, value);
    }
    try {
      WriteTextFile(Path("manifest-" + sub_->get_name() + ".json"),
                    ManifestJson(m));
    } catch (const std::exception& e) {
      std::cerr << "warning: " << e.what() << "\n";
    }
  }

  const Globals& globals() const { return globals_; }

 private:
  const Globals& globals_;
  CLI::App* sub_;
  std::vector<std::string> artifacts_;
};

void Print(const Summary& rows) {
  for (const auto& [k, v] : rows) std::cout << k << " " << v << "\n";
}

// ---- solve-potential

struct SolveFlags {
  std::string which = "equal";
  int grid = kDefaultPotentialGrid;
  std::string out;
};

int SolvePotential(const SolveFlags& flags, Context& ctx) {
  const PotentialTable f = flags.which == "equal"
                               ? PotentialTable::EqualClosed(flags.grid)
                               : PotentialTable::UnequalClosed(flags.grid);
  const std::string path =
      flags.out.empty() ? ctx.Path("f_" + flags.which + ".csv") : flags.out;
  WritePotentialCsv(f, path);
  ctx.Artifact(path);
  const double closed =
      flags.which == "equal" ? GammaEqual() : 1.0 - FUnequalClosed(0.0);
  const Summary rows = {{"case", flags.which},
                        {"grid", std::to_string(flags.grid)},
                        {"gamma", FormatG(closed)},
                        {"f_at_upper", FormatG(f.values().back())}};
  Print(rows);
  ctx.WriteSummary(rows);
  return 0;
}

// ---- verify-de

struct VerifyFlags {
  std::string potential = "equal";
  std::string inequality = "auto";
  int grid_l = 200;
  int grid_p = 200;
  double l_max = 3.0;
  double tolerance = 1e-6;
};

int VerifyDe(const VerifyFlags& flags, Context& ctx) {
  const PotentialTable f = LoadPotential(flags.potential);
  std::string which = flags.inequality;
  if (which == "auto") {
    which = f.kind() == PotentialKind::kEqualClosed ? "equal" : "unequal";
  }
  DeAudit audit;
  if (which == "equal") {
    audit = CheckDeEqual(f, flags.grid_l, flags.grid_p, flags.l_max);
  } else {
    audit = CheckDeUnequal(f, flags.grid_l, flags.grid_p, flags.l_max,
                           which == "unequal-std" ? DeMode::kStdLp
                                                  : DeMode::kConfigLp);
  }
  const bool ok = audit.min_slack >= -flags.tolerance;
  const Summary rows = {{"inequality", which},
                        {"gamma", FormatG(f.gamma())},
                        {"min_slack", FormatG(audit.min_slack)},
                        {"argmin_l", FormatG(audit.argmin_l)},
                        {"argmin_p", FormatG(audit.argmin_p)},
                        {"cells", std::to_string(audit.cells)},
                        {"status", ok ? "ok" : "violated"}};
  Print(rows);
  ctx.WriteSummary(rows);
  return ok ? 0 : 1;
}

// ---- iterate-fg

struct IterateFlags {
  int iters = 3;
  int grid = kDefaultPotentialGrid;
  double l_max = 2.0;
};

int IterateFgCommand(const IterateFlags& flags, Context& ctx) {
  const std::vector<FgIterate> its = IterateFg(flags.iters, flags.grid,
                                               flags.l_max);
  std::string summary = "iter,gamma\n";
  std::vector<Series> f_series, g_series;
  for (size_t k = 0; k < its.size(); ++k) {
    const std::string tag = std::to_string(k + 1);
    const std::string fp = ctx.Path("f_" + tag + ".csv");
    const std::string gp = ctx.Path("g_" + tag + ".csv");
    WritePotentialCsv(its[k].f, fp);
    WriteCutoffCsv(its[k].g, gp);
    ctx.Artifact(fp);
    ctx.Artifact(gp);
    summary += tag + "," + FormatG(its[k].gamma) + "\n";
    std::cout << "iter " << tag << " gamma " << FormatG(its[k].gamma) << "\n";
    Series fs{"f^" + tag, {}, {}}, gs{"g^" + tag, {}, {}};
    for (int i = 0; i <= its[k].f.intervals(); ++i) {
      fs.x.push_back(its[k].f.x(i));
      fs.y.push_back(its[k].f.values()[i]);
    }
    for (int i = 0; i <= its[k].g.intervals(); ++i) {
      gs.x.push_back(its[k].g.x(i));
      gs.y.push_back(its[k].g.values[i]);
    }
    f_series.push_back(std::move(fs));
    g_series.push_back(std::move(gs));
  }
  const std::string sp = ctx.Path("summary.csv");
  WriteTextFile(sp, summary);
  ctx.Artifact(sp);
  const std::string fsvg = ctx.Path("f.svg"), gsvg = ctx.Path("g.svg");
  WriteTextFile(fsvg, SvgLineChart("f iterates", "load", "f", f_series));
  WriteTextFile(gsvg, SvgLineChart("g iterates", "load", "g", g_series));
  ctx.Artifact(fsvg);
  ctx.Artifact(gsvg);
  return 0;
}

// ---- shared instance/potential flags

std::string DefaultPotential(Algorithm algo) {
  return algo == Algorithm::kFractional ? "unequal-closed" : "equal";
}

Instance LoadInstance(const std::string& path, double p) {
  Instance inst = ReadInstance(path);
  if (p > 0.0) inst = inst.ScaleProbabilities(p / inst.p_max());
  return inst;
}

// ---- simulate

struct SimulateFlags {
  std::string instance;
  std::string experiment;
  std::string algo = "sb";
  std::string model = "budget";
  std::string law = "exponential";
  double law_param = 0.0;
  int64_t trials = 1000;
  std::string potential;
  double delta = -1.0;
  double p = 0.0;
  double opt = -1.0;
};

int Simulate(const SimulateFlags& flags, Context& ctx) {
  ExperimentConfig config;
  std::string instance_path = flags.instance;
  std::string potential = flags.potential;
  if (!flags.experiment.empty()) {
    const ExperimentFile file = ReadExperimentFile(flags.experiment);
    config = file.config;
    instance_path = file.instance;
    if (potential.empty()) potential = file.potential;
  } else {
    config.algorithm = ParseAlgorithm(flags.algo);
    config.model = ParseModel(flags.model);
    config.law = ParseThresholdLaw(flags.law);
    config.law_param = flags.law_param;
    config.trials = flags.trials;
    config.seed = ctx.globals().seed;
    config.delta = flags.delta;
  }
  if (instance_path.empty()) {
    throw std::invalid_argument("simulate needs --instance or --experiment");
  }
  config.workers = ctx.globals().workers;
  if (potential.empty()) potential = DefaultPotential(config.algorithm);
  const Instance inst = LoadInstance(instance_path, flags.p);
  const PotentialTable f = LoadPotential(potential);
  const RatioEstimate est = EstimateRatio(inst, config, f, flags.opt);
  const std::string rp = ctx.Path("results.csv");
  WriteResultsCsv(est, rp);
  ctx.Artifact(rp);
  const bool ok = est.max_identity_error <= 1e-9;
  const Summary rows = {
      {"algorithm", ToString(config.algorithm)},
      {"model", ToString(config.model)},
      {"trials", std::to_string(config.trials)},
      {"opt", FormatG(est.opt)},
      {"objective_mean", FormatG(est.objective.mean)},
      {"objective_se", FormatG(est.objective.se)},
      {"ratio_mean", FormatG(est.ratio.mean)},
      {"ratio_se", FormatG(est.ratio.se)},
      {"rounding_failures", std::to_string(est.rounding_failures)},
      {"max_identity_error", FormatG(est.max_identity_error, 3)},
      {"status", ok ? "ok" : "identity-violated"}};
  Print(rows);
  ctx.WriteSummary(rows);
  return ok ? 0 : 1;
}

// ---- benchmark

struct BenchmarkFlags {
  std::string instance;
  bool config_lp = false;
  bool no_aggregate = false;
  double p = 0.0;
};

int Benchmark(const BenchmarkFlags& flags, Context& ctx) {
  const Instance inst = LoadInstance(flags.instance, flags.p);
  const double std_lp = StdLpOpt(inst, !flags.no_aggregate);
  Summary rows = {{"std_lp", FormatG(std_lp)}};
  int code = 0;
  if (flags.config_lp) {
    const double cfg = ConfigLpOptBruteforce(inst);
    rows.emplace_back("config_lp", FormatG(cfg));
    rows.emplace_back("difference", FormatG(std_lp - cfg));
    if (cfg > std_lp + 1e-9) code = 1;
  }
  Print(rows);
  ctx.WriteSummary(rows);
  return code;
}

// ---- audit

struct AuditFlags {
  std::string instance;
  std::string algo = "sb";
  std::string potential;
  std::string law = "exponential";
  double law_param = 0.0;
  int pairs = 40;
  int64_t trials = 500;
  std::string mode = "unconditional";
  double gamma = -1.0;
  double tolerance = 0.02;
  double p = 0.0;
};

int Audit(const AuditFlags& flags, Context& ctx) {
  AuditConfig config;
  config.algorithm = ParseAlgorithm(flags.algo);
  config.law = ParseThresholdLaw(flags.law);
  config.law_param = flags.law_param;
  config.pairs = flags.pairs;
  config.trials = flags.trials;
  config.seed = ctx.globals().seed;
  config.mode = flags.mode == "conditional" ? AuditMode::kConditional
                                            : AuditMode::kUnconditional;
  config.workers = ctx.globals().workers;
  config.gamma = flags.gamma;
  config.tolerance = flags.tolerance;
  const Instance inst = LoadInstance(flags.instance, flags.p);
  const PotentialTable f = LoadPotential(
      flags.potential.empty() ? DefaultPotential(config.algorithm)
                              : flags.potential);
  const AuditReport r = AuditDualFeasibility(inst, f, config);
  const std::string ap = ctx.Path("audit.csv");
  WriteAuditCsv(inst, r, ap);
  ctx.Artifact(ap);
  PrintAuditSummary(inst, r, std::cout);
  const bool ok = r.min_ratio >= r.gamma - r.tolerance;
  ctx.WriteSummary({{"gamma", FormatG(r.gamma)},
                    {"tolerance", FormatG(r.tolerance)},
                    {"pairs", std::to_string(r.pairs.size())},
                    {"runs", std::to_string(r.runs)},
                    {"min_ratio", FormatG(r.min_ratio)},
                    {"violations_3se", std::to_string(r.violations)},
                    {"status", ok ? "ok" : "below-gamma"}});
  return ok ? 0 : 1;
}

// ---- plot

struct PlotFlags {
  std::vector<std::string> inputs;
  std::string title = "stochmatch";
  std::string out = "plot.svg";
};

// First two columns of a CSV with a header row.
Series ReadSeries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Series s{fs::path(path).stem().string(), {}, {}};
  std::string line;
  std::getline(in, line);
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      s.x.push_back(std::stod(a));
      s.y.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(row), "expected two numbers");
    }
  }
  return s;
}

int Plot(const PlotFlags& flags, Context& ctx) {
  std::vector<Series> series;
  for (const std::string& in : flags.inputs) series.push_back(ReadSeries(in));
  const std::string path = ctx.Path(flags.out);
  WriteTextFile(path, SvgLineChart(flags.title, "x", "y", series));
  ctx.Artifact(path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

// ---- generate

struct GenerateFlags {
  std::string family = "tri";
  int n = 10;
  double p = 0.1;
  double weight_ratio = 1.0;
  int online = 20;
  double density = 0.5;
  double p_lo = 0.0;
  double w_hi = 1.0;
  int depth = 3;
  std::string out = "instance.json";
};

int Generate(const GenerateFlags& flags, Context& ctx) {
  Instance inst = [&] {
    if (flags.family == "tri") {
      return GenUpperTriangular(flags.n, flags.p,
                                flags.weight_ratio == 1.0
                                    ? WeightScheme::Uniform()
                                    : WeightScheme::Geometric(flags.weight_ratio));
    }
    if (flags.family == "cascade") return GenCascade(flags.depth, flags.p);
    RandomInstanceParams params;
    params.num_offline = flags.n;
    params.num_online = flags.online;
    params.density = flags.density;
    params.p_lo = flags.p_lo;
    params.p_hi = flags.p;
    params.w_hi = flags.w_hi;
    return GenRandom(params, ctx.globals().seed);
  }();
  const std::string path = ctx.Path(flags.out);
  WriteInstance(inst, path);
  ctx.Artifact(path);
  std::cout << "offline " << inst.num_offline() << "\nonline "
            << inst.num_online() << "\nedges " << inst.num_edges() << "\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"stochmatch: online stochastic matching potentials, "
               "simulations and audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "directory for artifacts and manifest")
      ->capture_default_str();
  app.add_option("--format", g.format, "summary format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads; 0 = hardware")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.fallthrough();

  std::function<int(Context&)> run;

  SolveFlags solve;
  CLI::App* s = app.add_subcommand("solve-potential",
                                   "tabulate a closed-form potential");
  s->add_option("--case", solve.which, "potential")
      ->check(CLI::IsMember({"equal", "unequal-closed"}))
      ->capture_default_str();
  s->add_option("--grid", solve.grid, "grid intervals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--out", solve.out, "CSV path (default <out-dir>/f_<case>.csv)");
  s->callback([&] { run = [&](Context& c) { return SolvePotential(solve, c); }; });

  VerifyFlags verify;
  CLI::App* v = app.add_subcommand("verify-de",
                                   "grid-audit a differential inequality");
  v->add_option("--potential", verify.potential,
                "equal, unequal-closed, constant:<c> or an x,f CSV")
      ->capture_default_str();
  v->add_option("--inequality", verify.inequality, "which inequality")
      ->check(CLI::IsMember({"auto", "equal", "unequal", "unequal-std"}))
      ->capture_default_str();
  v->add_option("--grid-l", verify.grid_l)->check(CLI::Range(1, 100000))
      ->capture_default_str();
  v->add_option("--grid-p", verify.grid_p)->check(CLI::Range(1, 100000))
      ->capture_default_str();
  v->add_option("--l-max", verify.l_max)->check(CLI::PositiveNumber)
      ->capture_default_str();
  v->add_option("--tolerance", verify.tolerance, "allowed negative slack")
      ->capture_default_str();
  v->callback([&] { run = [&](Context& c) { return VerifyDe(verify, c); }; });

  IterateFlags iterate;
  CLI::App* it = app.add_subcommand("iterate-fg",
                                    "alternate best-response g and LP f");
  it->add_option("--iters", iterate.iters)->check(CLI::Range(1, 50))
      ->capture_default_str();
  it->add_option("--grid", iterate.grid)->check(CLI::PositiveNumber)
      ->capture_default_str();
  it->add_option("--l-max", iterate.l_max)->check(CLI::PositiveNumber)
      ->capture_default_str();
  it->callback([&] { run = [&](Context& c) { return IterateFgCommand(iterate, c); }; });

  SimulateFlags sim;
  CLI::App* sm = app.add_subcommand("simulate", "Monte Carlo competitive ratio");
  sm->add_option("--instance", sim.instance, "instance JSON")
      ->check(CLI::ExistingFile);
  sm->add_option("--experiment", sim.experiment, "experiment JSON")
      ->check(CLI::ExistingFile);
  sm->add_option("--algo", sim.algo, "sb, weighted, greedy or fractional")
      ->check(CLI::IsMember({"sb", "weighted", "greedy", "fractional"}))
      ->capture_default_str();
  sm->add_option("--model", sim.model, "budget, rewards or rounded")
      ->check(CLI::IsMember({"budget", "rewards", "rounded"}))
      ->capture_default_str();
  sm->add_option("--law", sim.law, "threshold law")
      ->check(CLI::IsMember({"exponential", "geometric", "delta-enhanced"}))
      ->capture_default_str();
  sm->add_option("--law-param", sim.law_param, "p (geometric) or delta")
      ->capture_default_str();
  sm->add_option("--trials", sim.trials)->check(CLI::PositiveNumber)
      ->capture_default_str();
  sm->add_option("--potential", sim.potential,
                 "f table (default equal; unequal-closed for fractional)");
  sm->add_option("--delta", sim.delta, "rounding slack; negative = default")
      ->capture_default_str();
  sm->add_option("--p", sim.p, "rescale probabilities so that p_max = p")
      ->check(CLI::Range(0.0, 1.0));
  sm->add_option("--opt", sim.opt, "benchmark value; default StdLP");
  sm->callback([&] { run = [&](Context& c) { return Simulate(sim, c); }; });

  BenchmarkFlags bench;
  CLI::App* b = app.add_subcommand("benchmark", "LP upper bounds");
  b->add_option("--instance", bench.instance)->required()
      ->check(CLI::ExistingFile);
  b->add_flag("--config-lp", bench.config_lp,
              "also solve the configuration LP by enumeration");
  b->add_flag("--no-aggregate", bench.no_aggregate,
              "one StdLP column per edge instead of per class");
  b->add_option("--p", bench.p, "rescale probabilities so that p_max = p")
      ->check(CLI::Range(0.0, 1.0));
  b->callback([&] { run = [&](Context& c) { return Benchmark(bench, c); }; });

  AuditFlags audit;
  CLI::App* a = app.add_subcommand("audit", "sampled dual-feasibility audit");
  a->add_option("--instance", audit.instance)->required()
      ->check(CLI::ExistingFile);
  a->add_option("--algo", audit.algo)
      ->check(CLI::IsMember({"sb", "weighted", "greedy", "fractional"}))
      ->capture_default_str();
  a->add_option("--potential", audit.potential,
                "f table (default equal; unequal-closed for fractional)");
  a->add_option("--law", audit.law)
      ->check(CLI::IsMember({"exponential", "geometric", "delta-enhanced"}))
      ->capture_default_str();
  a->add_option("--law-param", audit.law_param)->capture_default_str();
  a->add_option("--pairs", audit.pairs)->check(CLI::PositiveNumber)
      ->capture_default_str();
  a->add_option("--trials", audit.trials)->check(CLI::PositiveNumber)
      ->capture_default_str();
  a->add_option("--mode", audit.mode)
      ->check(CLI::IsMember({"unconditional", "conditional"}))
      ->capture_default_str();
  a->add_option("--gamma", audit.gamma, "declared ratio; default 1 - f(0)")
      ->capture_default_str();
  a->add_option("--tolerance", audit.tolerance)->capture_default_str();
  a->add_option("--p", audit.p, "rescale probabilities so that p_max = p")
      ->check(CLI::Range(0.0, 1.0));
  a->callback([&] { run = [&](Context& c) { return Audit(audit, c); }; });

  PlotFlags plot;
  CLI::App* pl = app.add_subcommand("plot", "SVG line chart of x,y CSVs");
  pl->add_option("inputs", plot.inputs, "CSV files")->required()
      ->check(CLI::ExistingFile);
  pl->add_option("--title", plot.title)->capture_default_str();
  pl->add_option("--out", plot.out, "file name inside --out-dir")
      ->capture_default_str();
  pl->callback([&] { run = [&](Context& c) { return Plot(plot, c); }; });

  GenerateFlags gen;
  CLI::App* ge = app.add_subcommand("generate", "write a generated instance");
  ge->add_option("--family", gen.family)
      ->check(CLI::IsMember({"tri", "random", "cascade"}))
      ->capture_default_str();
  ge->add_option("--n", gen.n, "offline vertices")->check(CLI::PositiveNumber)
      ->capture_default_str();
  ge->add_option("--p", gen.p, "edge probability (upper end for random)")
      ->capture_default_str();
  ge->add_option("--weight-ratio", gen.weight_ratio,
                 "tri: geometric weight ratio")->capture_default_str();
  ge->add_option("--online", gen.online, "random: online vertices")
      ->capture_default_str();
  ge->add_option("--density", gen.density)->capture_default_str();
  ge->add_option("--p-lo", gen.p_lo)->capture_default_str();
  ge->add_option("--w-hi", gen.w_hi)->capture_default_str();
  ge->add_option("--depth", gen.depth, "cascade depth")->capture_default_str();
  ge->add_option("--out", gen.out, "file name inside --out-dir")
      ->capture_default_str();
  ge->callback([&] { run = [&](Context& c) { return Generate(gen, c); }; });

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  int code = 2;
  std::unique_ptr<Context> ctx;
  try {
    ctx = std::make_unique<Context>(g, sub);
    code = run(*ctx);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 2;
  }
  if (ctx) ctx->WriteManifest(code);
  return code;
}

}  // namespace
}  // namespace stochmatch

int main(int argc, char** argv) { return stochmatch::Main(argc, argv); }
