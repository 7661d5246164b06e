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
// Pool-based active-learning benchmarks: random hypothesis-table instances
// and the three figure sweeps (label-set size, continuation-probability lower
// end, and per-group selection composition), emitting figure-ready CSV rows.
//
// Generation is deterministic under the seed. Streams: purpose 1 draws the
// hypothesis weights (uniform, normalized), purpose 2 the label tables (per
// hypothesis, per point), purpose 3 the per-point continuation probabilities.
// Each sweep point derives its instance and episode seeds from (seed, sweep
// index), so whole sweeps are reproducible byte-for-byte for any thread
// count.
//

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/evaluation.hpp"
#include "cascade/format.hpp"
#include "cascade/policies.hpp"
#include "cascade/sequences.hpp"
#include "cascade/utility.hpp"

namespace cascade {

struct GroupSpec {
  int count = 0;   // points in the group
  int labels = 2;  // label-set size for every point of the group
};

struct ExperimentConfig {
  int hypotheses = 1000;
  std::vector<GroupSpec> groups = {{40, 2}, {5, 3}, {5, 4}};
  double delta_low = 0.0;
  double delta_high = 1.0;
  int rounds = 300;
  std::uint64_t seed = 0;
  std::vector<std::string> policies = {"greedy-plus", "random"};
  double rho = -1.0;  // < 0 means auto (rho_star)
  int threads = 0;
  bool credit_survivors = false;

  double effective_rho() const { return rho < 0.0 ? rho_star() : rho; }

  void validate() const {
    if (hypotheses < 2) throw InvalidInput("need at least 2 hypotheses");
    if (!(delta_low >= 0.0 && delta_low < delta_high && delta_high <= 1.0))
      throw InvalidInput("need 0 <= delta_low < delta_high <= 1");
    if (rounds < 1) throw InvalidInput("need rounds >= 1");
    int points = 0;
    for (const auto& g : groups) {
      if (g.count < 0 || g.labels < 2)
        throw InvalidInput("groups need count >= 0 and labels >= 2");
      points += g.count;
    }
    if (points < 1) throw InvalidInput("need at least 1 point");
  }
};

struct FigureRow {
  std::string sweep;  // name of the swept variable
  double sweep_value = 0.0;
  std::string policy;
  double mean_reduction_pct = 0.0;
  double std_error = 0.0;  // of the reduction percentage
  double mean_solution_size = 0.0;
  std::vector<double> group_pct;   // padded to 3 columns in CSV
  double solution_size_sd = 0.0;   // per-episode spread; not serialized
};

inline std::string figure_csv_header() {
  return csv_row({"sweep", "sweep_value", "policy", "mean_reduction_pct",
                  "stderr", "mean_solution_size", "group1_pct", "group2_pct",
                  "group3_pct"});
}

inline std::string figure_csv_row(const FigureRow& row) {
  std::vector<std::string> cells = {row.sweep,
                                    format_double(row.sweep_value),
                                    row.policy,
                                    format_double(row.mean_reduction_pct),
                                    format_double(row.std_error),
                                    format_double(row.mean_solution_size)};
  for (std::size_t g = 0; g < 3; ++g)
    cells.push_back(format_double(g < row.group_pct.size() ? row.group_pct[g]
                                                           : 0.0));
  return csv_row(cells);
}

inline std::string figure_csv(const std::vector<FigureRow>& rows) {
  std::string out = figure_csv_header();
  for (const auto& r : rows) out += figure_csv_row(r);
  return out;
}

// Random hypothesis table: weights are uniform draws normalized to sum 1,
// each hypothesis labels each point uniformly from the point's label set, and
// each point's continuation probability is uniform in [delta_low,
// delta_high). Points are laid out group by group with tags 1, 2, ...
inline Instance generate_instance(const ExperimentConfig& config) {
  config.validate();
  Instance inst;
  int alphabet = 2;
  for (const auto& g : config.groups) alphabet = std::max(alphabet, g.labels);
  inst.state_alphabet = static_cast<StateId>(alphabet);

  std::vector<int> labels_per_point;
  {
    SplitMix64 delta_rng = substream(config.seed, {3});
    ItemId id = 0;
    int tag = 0;
    for (const auto& g : config.groups) {
      ++tag;
      for (int p = 0; p < g.count; ++p) {
        Item item;
        item.id = id++;
        item.group = tag;
        item.delta = delta_rng.next_in(config.delta_low, config.delta_high);
        inst.items.push_back(item);
        labels_per_point.push_back(g.labels);
      }
    }
  }

  TabularPrior prior;
  {
    SplitMix64 weight_rng = substream(config.seed, {1});
    std::vector<double> raw(static_cast<std::size_t>(config.hypotheses));
    double sum = 0.0;
    for (double& w : raw) {
      do {
        w = weight_rng.next_double();
      } while (!(w > 0.0));
      sum += w;
    }
    SplitMix64 label_rng = substream(config.seed, {2});
    for (int h = 0; h < config.hypotheses; ++h) {
      TabularEntry entry;
      entry.weight = raw[static_cast<std::size_t>(h)] / sum;
      entry.phi.states.reserve(inst.size());
      for (std::size_t p = 0; p < inst.size(); ++p)
        entry.phi.states.push_back(static_cast<StateId>(
            label_rng.next_below(static_cast<std::uint64_t>(
                labels_per_point[p]))));
      prior.entries.push_back(std::move(entry));
    }
  }
  inst.prior = std::move(prior);
  return inst;
}

namespace detail {

// Episode policies by name. The random baseline re-seeds per episode so the
// reported mean is not tied to one arbitrary first pick; the deterministic
// policies ignore the round index.
inline PolicyFactory experiment_policy(const std::string& name,
                                       const UtilityModel& utility,
                                       double rho, std::uint64_t seed) {
  const Instance& inst = utility.instance();
  if (name == "random") {
    return [&inst, seed](std::uint64_t round) {
      return MixturePolicy::pure(
          std::make_shared<RandomPolicy>(inst, derive_stream_state(seed, {0x52, round})));
    };
  }
  if (name == "greedy-plus") {
    auto mixture = std::make_shared<MixturePolicy>(greedy_plus(utility, rho));
    return [mixture](std::uint64_t) { return *mixture; };
  }
  if (name == "pi-a") {
    auto p = MixturePolicy::pure(std::make_shared<SingletonFirstPolicy>(utility));
    return [p](std::uint64_t) { return p; };
  }
  if (name == "pi-b") {
    auto p = MixturePolicy::pure(std::make_shared<RatioGreedyPolicy>(utility));
    return [p](std::uint64_t) { return p; };
  }
  throw InvalidInput("unknown experiment policy \"" + name + "\"");
}

// Mean credited reduction (in percent) plus solution-size and per-group
// statistics for one (instance, policy) pair.
inline FigureRow run_point(const std::string& sweep, double sweep_value,
                           const std::string& policy_name,
                           const ExperimentConfig& config,
                           const Instance& inst, std::uint64_t episode_seed) {
  VersionSpaceUtility utility(inst);
  SimulateOptions opt;
  opt.rounds = static_cast<std::uint64_t>(config.rounds);
  opt.seed = episode_seed;
  opt.threads = config.threads;
  opt.credit_survivors = config.credit_survivors;
  const PolicyFactory factory = experiment_policy(
      policy_name, utility, config.effective_rho(), episode_seed);
  const SimulateResult sim = simulate(factory, inst, utility, opt);
  FigureRow row;
  row.sweep = sweep;
  row.sweep_value = sweep_value;
  row.policy = policy_name;
  row.mean_reduction_pct = 100.0 * sim.result.value;
  row.std_error = 100.0 * sim.result.std_error;
  row.mean_solution_size = sim.result.mean_solution_size;
  row.group_pct = sim.result.group_pct;
  row.solution_size_sd = sim.result.solution_size_sd;
  return row;
}

}  // namespace detail

// Reduction vs label-set size: every point gets the same label-set size; one
// row per (size, policy). Sweep points share the weight and continuation
// draws (the label alphabet forces fresh label tables), so the comparison
// across sizes is paired; episode streams are keyed per point.
inline std::vector<FigureRow> run_label_sweep(const ExperimentConfig& config,
                                              const std::vector<int>& sizes) {
  config.validate();
  if (sizes.empty()) throw InvalidInput("label sweep needs at least one size");
  int points = 0;
  for (const auto& g : config.groups) points += g.count;
  std::vector<FigureRow> rows;
  for (const int size : sizes) {
    if (size < 2) throw InvalidInput("label-set sizes must be >= 2");
    ExperimentConfig point = config;
    point.groups = {{points, size}};
    const Instance inst = generate_instance(point);
    for (std::size_t p = 0; p < config.policies.size(); ++p)
      rows.push_back(detail::run_point(
          "labels", size, config.policies[p], point, inst,
          derive_stream_state(
              config.seed,
              {0x4C, static_cast<std::uint64_t>(size), 0x45, p})));
  }
  return rows;
}

// Reduction vs the lower end of the continuation-probability range, with the
// configured (heterogeneous) group mix. Sweep points share the hypothesis
// table and the underlying uniform continuation draws (delta = low +
// (1 - low) u with common u), a paired design: every lower end sees the same
// instance up to the rescaled continuation probabilities.
inline std::vector<FigureRow> run_delta_sweep(
    const ExperimentConfig& config, const std::vector<double>& lower_ends) {
  config.validate();
  if (lower_ends.empty())
    throw InvalidInput("delta sweep needs at least one lower end");
  std::vector<FigureRow> rows;
  for (std::size_t k = 0; k < lower_ends.size(); ++k) {
    const double low = lower_ends[k];
    if (!(low >= 0.0 && low < 1.0))
      throw InvalidInput("lower ends must lie in [0,1)");
    ExperimentConfig point = config;
    point.delta_low = low;
    point.delta_high = 1.0;
    const Instance inst = generate_instance(point);
    for (std::size_t p = 0; p < config.policies.size(); ++p)
      rows.push_back(detail::run_point(
          "delta_low", low, config.policies[p], point, inst,
          derive_stream_state(
              config.seed,
              {0x44, std::bit_cast<std::uint64_t>(low), 0x45, p})));
  }
  return rows;
}

// Per-group selection percentages of the greedy-plus mixture across
// continuation-probability lower ends.
inline std::vector<FigureRow> run_group_composition(
    const ExperimentConfig& config, const std::vector<double>& lower_ends) {
  ExperimentConfig greedy_only = config;
  greedy_only.policies = {"greedy-plus"};
  return run_delta_sweep(greedy_only, lower_ends);
}

}  // namespace cascade
