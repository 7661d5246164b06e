// Copyright 2026 The Authors.
//
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

//
// cascade: command-line front end for instance generation, policy runs,
// exact and Monte Carlo evaluation, brute-force oracles, definitional
// checkers, and the benchmark sweeps.
//
// Exit codes: 0 success, 1 domain error (invalid instance, failed
// precondition, resource limit), 2 usage error. Every stochastic subcommand
// requires an explicit --seed; nothing is seeded from the clock. All numeric
// output is round-trip-safe decimal.
//

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cascade/core.hpp"
#include "cascade/evaluation.hpp"
#include "cascade/experiments.hpp"
#include "cascade/format.hpp"
#include "cascade/instance_io.hpp"
#include "cascade/oracle.hpp"
#include "cascade/policies.hpp"
#include "cascade/sequences.hpp"
#include "cascade/utility.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct OutputSink {
  std::string path;  // empty or "-" means stdout

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cascade::Error("cannot open output file " + path);
    out << text;
  }
};

cascade::LoadedInstance load_from(const std::string& path) {
  if (path.empty() || path == "-") return cascade::load_instance(std::cin, "<stdin>");
  return cascade::load_instance_file(path);
}

// "2,3,4" or "2..6" (inclusive range).
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("range must be nondecreasing");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stoi(cell));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

// "40x2,5x3,5x4"
std::vector<cascade::GroupSpec> parse_groups(const std::string& text) {
  std::vector<cascade::GroupSpec> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto x = cell.find('x');
    if (x == std::string::npos)
      throw CLI::ValidationError("group spec must look like 40x2");
    out.push_back({std::stoi(cell.substr(0, x)),
                   std::stoi(cell.substr(x + 1))});
  }
  if (out.empty()) throw CLI::ValidationError("empty group list");
  return out;
}

double resolve_rho(const std::string& rho_text) {
  if (rho_text == "auto") return cascade::rho_star();
  const double rho = std::stod(rho_text);
  if (!(rho >= 0.0 && rho <= 1.0))
    throw cascade::InvalidInput("rho must lie in [0,1] (or \"auto\")");
  return rho;
}

// Policy specs: fixed:<comma-ids>, random, pi-a, pi-b, pi-b-restricted,
// greedy-plus.
cascade::MixturePolicy make_policy(const std::string& spec,
                                   const cascade::UtilityModel& utility,
                                   double rho,
                                   std::optional<std::uint64_t> seed) {
  using namespace cascade;
  const Instance& inst = utility.instance();
  if (spec.rfind("fixed:", 0) == 0) {
    ItemSequence seq;
    std::stringstream ss(spec.substr(6));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      seq.push_back(static_cast<ItemId>(std::stol(cell)));
    }
    return MixturePolicy::pure(
        std::make_shared<FixedSequencePolicy>(inst, std::move(seq)));
  }
  if (spec == "random") {
    if (!seed)
      throw InvalidInput("policy \"random\" requires --seed");
    return MixturePolicy::pure(std::make_shared<RandomPolicy>(inst, *seed));
  }
  if (spec == "pi-a")
    return MixturePolicy::pure(std::make_shared<SingletonFirstPolicy>(utility));
  if (spec == "pi-b")
    return MixturePolicy::pure(std::make_shared<RatioGreedyPolicy>(utility));
  if (spec == "pi-b-restricted")
    return MixturePolicy::pure(
        std::make_shared<BudgetedRatioGreedyPolicy>(utility, rho));
  if (spec == "greedy-plus") return greedy_plus(utility, rho);
  throw InvalidInput("unknown policy \"" + spec +
                     "\" (expected fixed:<ids>, random, pi-a, pi-b, "
                     "pi-b-restricted, or greedy-plus)");
}

json meta_json(std::optional<std::uint64_t> seed,
               const std::vector<std::string>& argv) {
  json meta;
  meta["version"] = kVersion;
  if (seed) meta["seed"] = *seed;
  std::string flags;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (i) flags += ' ';
    flags += argv[i];
  }
  meta["flags"] = flags;
  return meta;
}

std::string eval_csv(const cascade::EvalResult& r, const std::string& policy,
                     double rho, std::uint64_t rounds,
                     std::optional<std::uint64_t> seed) {
  using cascade::format_double;
  std::string out = cascade::csv_row(
      {"policy", "rho", "rounds", "seed", "mean_value", "stderr",
       "mean_solution_size", "group1_pct", "group2_pct", "group3_pct"});
  std::vector<std::string> cells = {
      policy, format_double(rho), std::to_string(rounds),
      seed ? std::to_string(*seed) : "", format_double(r.value),
      format_double(r.std_error), format_double(r.mean_solution_size)};
  for (std::size_t g = 0; g < 3; ++g)
    cells.push_back(
        format_double(g < r.group_pct.size() ? r.group_pct[g] : 0.0));
  out += cascade::csv_row(cells);
  return out;
}

json eval_json(const cascade::EvalResult& r) {
  json row;
  row["mode"] = std::string(cascade::to_string(r.mode));
  row["value"] = r.value;
  row["stderr"] = r.std_error;
  row["trials"] = r.trials;
  row["mean_solution_size"] = r.mean_solution_size;
  row["group_pct"] = r.group_pct;
  if (!r.breakdown.empty()) {
    json bds = json::array();
    for (const auto& bd : r.breakdown) {
      json b;
      b["realization"] = bd.realization_index;
      b["probability"] = bd.probability;
      b["adopted"] = bd.adopted;
      b["survival_mass"] = bd.survival_mass;
      json deaths = json::array();
      for (const auto& dp : bd.death_points)
        deaths.push_back({{"position", dp.position},
                          {"weight", dp.weight},
                          {"utility", dp.utility}});
      b["death_points"] = std::move(deaths);
      bds.push_back(std::move(b));
    }
    row["breakdown"] = std::move(bds);
  }
  return row;
}

json witness_json(const cascade::CheckWitness& w) {
  json out;
  auto obs_json = [](const auto& obs) {
    json arr = json::array();
    for (const auto& o : obs) arr.push_back({{"item", o.item}, {"state", o.state}});
    return arr;
  };
  out["psi"] = obs_json(w.psi);
  out["psi_prime"] = obs_json(w.psi_prime);
  if (w.item) out["item"] = *w.item;
  if (!w.pool.empty()) out["pool"] = w.pool;
  if (!w.deltas.empty()) out["deltas"] = w.deltas;
  out["lhs"] = w.lhs;
  out["rhs"] = w.rhs;
  return out;
}

json report_json(const cascade::CheckReport& r) {
  json out;
  out["property"] = r.property;
  out["passed"] = r.passed;
  out["min_slack"] = r.min_slack;
  out["cases"] = r.cases;
  if (r.witness) out["witness"] = witness_json(*r.witness);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cascade: adaptive item-sequence selection under continuation "
      "probabilities.\nLibrary front end: instance generation, policy "
      "evaluation, brute-force oracles,\ndefinitional checkers, and benchmark "
      "sweeps. Deterministic under --seed."};
  app.name("cascade");
  app.require_subcommand(1);
  app.get_formatter()->column_width(30);

  std::vector<std::string> argv_copy(argv, argv + argc);

  // ---- constants ----
  auto* cmd_constants = app.add_subcommand(
      "constants", "Print rho_star, alpha(rho_star), and the guarantee");
  std::string constants_rho = "auto";
  cmd_constants->add_option("--rho", constants_rho,
                            "Evaluate alpha/guarantee at this rho instead "
                            "(number or \"auto\")")
      ->capture_default_str();

  // ---- gen ----
  auto* cmd_gen = app.add_subcommand(
      "gen", "Generate a random active-learning instance (hypothesis table)");
  int gen_hypotheses = 1000;
  int gen_points = 50;
  int gen_labels = 2;
  std::string gen_groups;
  double gen_delta_low = 0.0, gen_delta_high = 1.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  cmd_gen->add_option("--hypotheses", gen_hypotheses, "Number of hypotheses")
      ->capture_default_str();
  cmd_gen->add_option("--points", gen_points, "Number of data points")
      ->capture_default_str();
  cmd_gen->add_option("--labels", gen_labels,
                      "Label-set size for every point (homogeneous)")
      ->capture_default_str();
  cmd_gen->add_option("--groups", gen_groups,
                      "Heterogeneous groups as countxlabels[,...], e.g. "
                      "40x2,5x3,5x4 (overrides --points/--labels)");
  cmd_gen->add_option("--delta-low", gen_delta_low,
                      "Lower end of the continuation-probability range")
      ->capture_default_str();
  cmd_gen->add_option("--delta-high", gen_delta_high,
                      "Upper end of the continuation-probability range")
      ->capture_default_str();
  cmd_gen->add_option("--seed", gen_seed, "PRNG seed (required)")->required();
  cmd_gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

  // ---- eval ----
  auto* cmd_eval = app.add_subcommand(
      "eval", "Evaluate a policy exactly or by Monte Carlo simulation");
  std::string eval_instance = "-";
  std::string eval_policy;
  std::string eval_mode = "exact";
  std::string eval_rho = "auto";
  std::uint64_t eval_rounds = 1000;
  std::optional<std::uint64_t> eval_seed;
  int eval_threads = 0;
  bool eval_json_out = false;
  bool eval_breakdown = false;
  bool eval_credit_survivors = false;
  std::string eval_out;
  cmd_eval->add_option("--instance", eval_instance,
                       "Instance JSON file, or - for stdin")
      ->capture_default_str();
  cmd_eval->add_option("--policy", eval_policy,
                       "fixed:<ids> | random | pi-a | pi-b | pi-b-restricted "
                       "| greedy-plus")
      ->required();
  cmd_eval->add_option("--mode", eval_mode, "exact | nodeath | mc")
      ->check(CLI::IsMember({"exact", "nodeath", "mc"}))
      ->capture_default_str();
  cmd_eval->add_option("--rho", eval_rho,
                       "Reachability threshold (number or \"auto\")")
      ->capture_default_str();
  cmd_eval->add_option("--rounds", eval_rounds, "Monte Carlo rounds")
      ->capture_default_str();
  cmd_eval->add_option("--seed", eval_seed,
                       "PRNG seed (required for mc or random policy)");
  cmd_eval->add_option("--threads", eval_threads,
                       "Worker threads (0 = available parallelism)")
      ->capture_default_str();
  cmd_eval->add_flag("--json", eval_json_out, "Emit JSON instead of CSV");
  cmd_eval->add_flag("--breakdown", eval_breakdown,
                     "Include per-realization breakdowns (JSON only)");
  cmd_eval->add_flag("--credit-survivors", eval_credit_survivors,
                     "Diagnostic: also credit episodes that survive the whole "
                     "sequence (not the analyzed objective)");
  cmd_eval->add_option("-o,--output", eval_out, "Output file (default stdout)");

  // ---- run ----
  auto* cmd_run = app.add_subcommand(
      "run", "Simulate episodes and print one trace row per round");
  std::string run_instance = "-";
  std::string run_policy;
  std::string run_rho = "auto";
  std::uint64_t run_rounds = 10;
  std::uint64_t run_seed = 0;
  int run_threads = 0;
  bool run_json_out = false;
  bool run_credit_survivors = false;
  std::string run_out;
  cmd_run->add_option("--instance", run_instance,
                      "Instance JSON file, or - for stdin")
      ->capture_default_str();
  cmd_run->add_option("--policy", run_policy,
                      "fixed:<ids> | random | pi-a | pi-b | pi-b-restricted "
                      "| greedy-plus")
      ->required();
  cmd_run->add_option("--rho", run_rho,
                      "Reachability threshold (number or \"auto\")")
      ->capture_default_str();
  cmd_run->add_option("--rounds", run_rounds, "Episodes to simulate")
      ->capture_default_str();
  cmd_run->add_option("--seed", run_seed, "PRNG seed (required)")->required();
  cmd_run->add_option("--threads", run_threads,
                      "Worker threads (0 = available parallelism)")
      ->capture_default_str();
  cmd_run->add_flag("--json", run_json_out, "Emit JSON instead of CSV");
  cmd_run->add_flag("--credit-survivors", run_credit_survivors,
                    "Diagnostic: also credit surviving episodes");
  cmd_run->add_option("-o,--output", run_out, "Output file (default stdout)");

  // ---- oracle ----
  auto* cmd_oracle = app.add_subcommand(
      "oracle", "Brute-force optimal policy value on a small instance");
  std::string oracle_instance = "-";
  std::string oracle_variant = "none";
  std::string oracle_rho = "auto";
  bool oracle_json_out = false;
  std::string oracle_out;
  cmd_oracle->add_option("--instance", oracle_instance,
                         "Instance JSON file, or - for stdin")
      ->capture_default_str();
  cmd_oracle->add_option("--variant", oracle_variant,
                         "none | rho | strong-rho | budget-nodeath")
      ->check(CLI::IsMember({"none", "rho", "strong-rho", "budget-nodeath"}))
      ->capture_default_str();
  cmd_oracle->add_option("--rho", oracle_rho,
                         "Reachability threshold (number or \"auto\")")
      ->capture_default_str();
  cmd_oracle->add_flag("--json", oracle_json_out, "Emit JSON instead of CSV");
  cmd_oracle->add_option("-o,--output", oracle_out,
                         "Output file (default stdout)");

  // ---- check ----
  auto* cmd_check = app.add_subcommand(
      "check", "Run a definitional property checker (JSON report)");
  std::string check_instance = "-";
  std::string check_property;
  int check_delta_samples = 5;
  std::uint64_t check_seed = 0;
  std::string check_rho = "auto";
  std::string check_out;
  cmd_check->add_option("--instance", check_instance,
                        "Instance JSON file, or - for stdin")
      ->capture_default_str();
  cmd_check->add_option("--property", check_property,
                        "monotone | submodular | cascade | bound-chain")
      ->check(CLI::IsMember({"monotone", "submodular", "cascade",
                             "bound-chain"}))
      ->required();
  cmd_check->add_option("--delta-samples", check_delta_samples,
                        "Random continuation vectors for the cascade checker")
      ->capture_default_str();
  cmd_check->add_option("--seed", check_seed,
                        "PRNG seed for sampled continuation vectors")
      ->capture_default_str();
  cmd_check->add_option("--rho", check_rho,
                        "Reachability threshold for bound-chain")
      ->capture_default_str();
  cmd_check->add_option("-o,--output", check_out,
                        "Output file (default stdout)");

  // ---- bench ----
  auto* cmd_bench = app.add_subcommand(
      "bench", "Benchmark sweeps emitting figure-ready CSV");
  cmd_bench->require_subcommand(1);
  int bench_hypotheses = 1000;
  int bench_points = 50;
  std::string bench_groups = "40x2,5x3,5x4";
  int bench_rounds = 300;
  std::uint64_t bench_seed = 0;
  std::string bench_rho = "auto";
  int bench_threads = 0;
  bool bench_json_out = false;
  bool bench_credit_survivors = false;
  std::string bench_out;
  std::string bench_labels = "2..6";
  double bench_delta_low = 0.0;
  std::string bench_lower_ends = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  std::string bench_groups_lower_ends = "0,0.5,0.8";
  cmd_bench->add_option("--hypotheses", bench_hypotheses,
                        "Number of hypotheses")
      ->capture_default_str();
  cmd_bench->add_option("--points", bench_points,
                        "Number of data points (label sweep)")
      ->capture_default_str();
  cmd_bench->add_option("--groups", bench_groups,
                        "Group mix as countxlabels[,...] (delta/group sweeps)")
      ->capture_default_str();
  cmd_bench->add_option("--rounds", bench_rounds, "Episodes per sweep point")
      ->capture_default_str();
  cmd_bench->add_option("--seed", bench_seed, "PRNG seed (required)")
      ->required();
  cmd_bench->add_option("--rho", bench_rho,
                        "Mixture threshold (number or \"auto\")")
      ->capture_default_str();
  cmd_bench->add_option("--threads", bench_threads,
                        "Worker threads (0 = available parallelism)")
      ->capture_default_str();
  cmd_bench->add_flag("--json", bench_json_out, "Emit JSON instead of CSV");
  cmd_bench->add_flag("--credit-survivors", bench_credit_survivors,
                      "Diagnostic: also credit surviving episodes");
  cmd_bench->add_option("-o,--output", bench_out,
                        "Output file (default stdout)");
  auto* cmd_fig1 = cmd_bench->add_subcommand(
      "fig1", "Reduction and solution size vs label-set size");
  cmd_fig1->fallthrough();
  cmd_fig1->add_option("--labels", bench_labels,
                       "Label-set sizes, e.g. 2..6 or 2,4,6")
      ->capture_default_str();
  cmd_fig1->add_option("--delta-low", bench_delta_low,
                       "Lower end of the continuation-probability range")
      ->capture_default_str();
  auto* cmd_figdelta = cmd_bench->add_subcommand(
      "fig-delta",
      "Reduction and solution size vs continuation-probability lower end");
  cmd_figdelta->fallthrough();
  cmd_figdelta->add_option("--lower-ends", bench_lower_ends,
                           "Comma-separated lower ends in [0,1)")
      ->capture_default_str();
  auto* cmd_figgroups = cmd_bench->add_subcommand(
      "fig-groups", "Per-group selection percentages of greedy-plus");
  cmd_figgroups->fallthrough();
  cmd_figgroups->add_option("--lower-ends", bench_groups_lower_ends,
                            "Comma-separated lower ends in [0,1)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_constants) {
      const double rs = cascade::rho_star();
      const double rho = constants_rho == "auto" ? rs : resolve_rho(constants_rho);
      std::string out = cascade::csv_row({"name", "value"});
      out += cascade::csv_row({"rho_star", cascade::format_double(rs)});
      out += cascade::csv_row({"rho", cascade::format_double(rho)});
      out += cascade::csv_row(
          {"alpha", cascade::format_double(cascade::alpha(rho))});
      out += cascade::csv_row(
          {"guarantee", cascade::format_double(cascade::guarantee(rho))});
      std::cout << out;
      return 0;
    }

    if (*cmd_gen) {
      cascade::ExperimentConfig config;
      config.hypotheses = gen_hypotheses;
      if (!gen_groups.empty())
        config.groups = parse_groups(gen_groups);
      else
        config.groups = {{gen_points, gen_labels}};
      config.delta_low = gen_delta_low;
      config.delta_high = gen_delta_high;
      config.seed = gen_seed;
      const cascade::Instance inst = cascade::generate_instance(config);
      std::ostringstream text;
      cascade::save_instance(text, inst, {"version-space", {}});
      OutputSink{gen_out}.write(text.str());
      return 0;
    }

    if (*cmd_eval) {
      const cascade::LoadedInstance loaded = load_from(eval_instance);
      const auto utility = loaded.make_utility();
      const double rho = resolve_rho(eval_rho);
      if (eval_mode == "mc" && !eval_seed)
        throw cascade::InvalidInput("--mode mc requires --seed");
      const cascade::MixturePolicy policy =
          make_policy(eval_policy, *utility, rho, eval_seed);
      cascade::EvalResult result;
      if (eval_mode == "mc") {
        cascade::SimulateOptions opt;
        opt.rounds = eval_rounds;
        opt.seed = *eval_seed;
        opt.threads = eval_threads;
        opt.credit_survivors = eval_credit_survivors;
        result = cascade::simulate(policy, loaded.instance, *utility, opt).result;
      } else {
        cascade::ExactOptions opt;
        opt.want_breakdown = eval_breakdown;
        opt.credit_survivors = eval_credit_survivors;
        result = eval_mode == "exact"
                     ? cascade::exact_favg(policy, loaded.instance, *utility, opt)
                     : cascade::exact_favg_nodeath(policy, loaded.instance,
                                                   *utility, opt);
      }
      std::string text;
      if (eval_json_out) {
        json doc;
        doc["meta"] = meta_json(eval_seed, argv_copy);
        doc["rows"] = json::array({eval_json(result)});
        text = doc.dump(2) + "\n";
      } else {
        text = eval_csv(result, eval_policy, rho,
                        eval_mode == "mc" ? eval_rounds : 0, eval_seed);
      }
      OutputSink{eval_out}.write(text);
      return 0;
    }

    if (*cmd_run) {
      const cascade::LoadedInstance loaded = load_from(run_instance);
      const auto utility = loaded.make_utility();
      const double rho = resolve_rho(run_rho);
      const cascade::MixturePolicy policy =
          make_policy(run_policy, *utility, rho, run_seed);
      cascade::SimulateOptions opt;
      opt.rounds = run_rounds;
      opt.seed = run_seed;
      opt.threads = run_threads;
      opt.credit_survivors = run_credit_survivors;
      opt.trace_limit = run_rounds;
      const cascade::SimulateResult sim =
          cascade::simulate(policy, loaded.instance, *utility, opt);
      std::string text;
      if (run_json_out) {
        json rows = json::array();
        for (const auto& tr : sim.traces) {
          json row;
          row["round"] = tr.round;
          row["policy"] = tr.policy;
          row["phi"] = tr.phi.states;
          row["selected"] = tr.selected;
          if (tr.died_after) row["died_after"] = *tr.died_after;
          row["credited"] = tr.credited;
          row["group_counts"] = tr.group_counts;
          rows.push_back(std::move(row));
        }
        json doc;
        doc["meta"] = meta_json(run_seed, argv_copy);
        doc["rows"] = std::move(rows);
        doc["mean_value"] = sim.result.value;
        doc["stderr"] = sim.result.std_error;
        text = doc.dump(2) + "\n";
      } else {
        text = cascade::csv_row(
            {"round", "policy", "selected", "died_after", "credited", "size"});
        for (const auto& tr : sim.traces) {
          std::string items;
          for (std::size_t k = 0; k < tr.selected.size(); ++k) {
            if (k) items += ';';
            items += std::to_string(tr.selected[k]);
          }
          text += cascade::csv_row(
              {std::to_string(tr.round), tr.policy, items,
               tr.died_after ? std::to_string(*tr.died_after) : "survived",
               cascade::format_double(tr.credited),
               std::to_string(tr.selected.size())});
        }
      }
      OutputSink{run_out}.write(text);
      return 0;
    }

    if (*cmd_oracle) {
      const cascade::LoadedInstance loaded = load_from(oracle_instance);
      const auto utility = loaded.make_utility();
      cascade::OracleConfig config;
      config.rho = resolve_rho(oracle_rho);
      if (oracle_variant == "none")
        config.variant = cascade::OracleVariant::Unconstrained;
      else if (oracle_variant == "rho")
        config.variant = cascade::OracleVariant::RhoReachable;
      else if (oracle_variant == "strong-rho")
        config.variant = cascade::OracleVariant::StronglyRhoReachable;
      else
        config.variant = cascade::OracleVariant::BudgetNoDeath;
      const cascade::OptimalPlan plan =
          cascade::solve(loaded.instance, *utility, config);
      std::string text;
      if (oracle_json_out) {
        json doc;
        doc["meta"] = meta_json(std::nullopt, argv_copy);
        doc["rows"] = json::array(
            {{{"variant", std::string(cascade::to_string(plan.variant))},
              {"rho", plan.rho},
              {"value", plan.value},
              {"table_size", plan.table.size()}}});
        text = doc.dump(2) + "\n";
      } else {
        text = cascade::csv_row({"variant", "rho", "value", "table_size"});
        text += cascade::csv_row({std::string(cascade::to_string(plan.variant)),
                                  cascade::format_double(plan.rho),
                                  cascade::format_double(plan.value),
                                  std::to_string(plan.table.size())});
      }
      OutputSink{oracle_out}.write(text);
      return 0;
    }

    if (*cmd_check) {
      const cascade::LoadedInstance loaded = load_from(check_instance);
      const auto utility = loaded.make_utility();
      json doc;
      doc["meta"] = meta_json(check_seed, argv_copy);
      if (check_property == "monotone") {
        doc["report"] = report_json(
            cascade::check_adaptive_monotone(loaded.instance, *utility));
      } else if (check_property == "submodular") {
        doc["report"] = report_json(
            cascade::check_adaptive_submodular(loaded.instance, *utility));
      } else if (check_property == "cascade") {
        doc["report"] = report_json(cascade::check_cascade_submodular(
            loaded.instance, *utility, check_delta_samples, check_seed));
      } else {
        const cascade::BoundChainReport chain = cascade::verify_bound_chain(
            loaded.instance, *utility, resolve_rho(check_rho), true,
            check_delta_samples, check_seed);
        json r;
        r["rho"] = chain.rho;
        r["opt_unconstrained"] = chain.opt_unconstrained;
        r["opt_reachable"] = chain.opt_reachable;
        r["opt_strongly"] = chain.opt_strongly;
        r["opt_budget_nodeath"] = chain.opt_budget_nodeath;
        r["best_singleton"] = chain.best_singleton;
        r["discard_ok"] = chain.discard_ok;
        r["singleton_ok"] = chain.singleton_ok;
        r["nodeath_ok"] = chain.nodeath_ok;
        if (chain.monotone_ok) r["monotone_ok"] = *chain.monotone_ok;
        if (chain.cascade_ok) r["cascade_ok"] = *chain.cascade_ok;
        r["inequalities_hold"] = chain.inequalities_hold();
        doc["report"] = std::move(r);
      }
      OutputSink{check_out}.write(doc.dump(2) + "\n");
      return 0;
    }

    if (*cmd_bench) {
      cascade::ExperimentConfig config;
      config.hypotheses = bench_hypotheses;
      config.rounds = bench_rounds;
      config.seed = bench_seed;
      config.rho = bench_rho == "auto" ? -1.0 : resolve_rho(bench_rho);
      config.threads = bench_threads;
      config.credit_survivors = bench_credit_survivors;
      std::vector<cascade::FigureRow> rows;
      if (*cmd_fig1) {
        config.groups = {{bench_points, 2}};
        config.delta_low = bench_delta_low;
        rows = cascade::run_label_sweep(config, parse_int_list(bench_labels));
      } else if (*cmd_figdelta) {
        config.groups = parse_groups(bench_groups);
        rows = cascade::run_delta_sweep(config,
                                        parse_double_list(bench_lower_ends));
      } else {
        config.groups = parse_groups(bench_groups);
        rows = cascade::run_group_composition(
            config, parse_double_list(bench_groups_lower_ends));
      }
      std::string text;
      if (bench_json_out) {
        json out_rows = json::array();
        for (const auto& r : rows) {
          json row;
          row["sweep"] = r.sweep;
          row["sweep_value"] = r.sweep_value;
          row["policy"] = r.policy;
          row["mean_reduction_pct"] = r.mean_reduction_pct;
          row["stderr"] = r.std_error;
          row["mean_solution_size"] = r.mean_solution_size;
          row["group_pct"] = r.group_pct;
          out_rows.push_back(std::move(row));
        }
        json doc;
        doc["meta"] = meta_json(bench_seed, argv_copy);
        doc["rows"] = std::move(out_rows);
        text = doc.dump(2) + "\n";
      } else {
        text = cascade::figure_csv(rows);
      }
      OutputSink{bench_out}.write(text);
      return 0;
    }
  } catch (const cascade::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
