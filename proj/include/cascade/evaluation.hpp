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
// Policy evaluation.
//
// The exact evaluator sums, over realizations and death positions, the
// utility of the selected prefix weighted by the probability the process
// dies exactly there:
//
//   value = E_phi[ sum_k (1 - delta_{S^k}) (prod_{i in S^(k-1)} delta_i)
//                        f(S^(k), phi) ]
//
// An episode that survives the policy's whole adopted sequence credits
// nothing under this objective; the optional credit_survivors switch adds the
// terminal utility back in as a clearly labeled diagnostic. The no-death
// evaluator instead takes the plain expectation of f over the full adopted
// sequence.
//
// The Monte Carlo simulator mirrors the exact objective with per-round
// substreams, and aggregates in round-index order with pairwise summation so
// results are bit-identical for any thread count.
//

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/policies.hpp"
#include "cascade/rng.hpp"
#include "cascade/sequences.hpp"
#include "cascade/utility.hpp"

namespace cascade {

enum class EvalMode { ExactEq1, ExactNoDeath, MonteCarlo };

inline std::string_view to_string(EvalMode m) {
  switch (m) {
    case EvalMode::ExactEq1: return "exact";
    case EvalMode::ExactNoDeath: return "exact-nodeath";
    case EvalMode::MonteCarlo: return "mc";
  }
  return "?";
}

struct DeathPoint {
  std::size_t position = 0;  // 1-based index of the item died after
  double weight = 0.0;       // (1 - delta) times the prefix survival product
  double utility = 0.0;      // f(prefix, phi)
};

struct RealizationBreakdown {
  std::size_t realization_index = 0;
  double probability = 0.0;
  ItemSequence adopted;
  std::vector<DeathPoint> death_points;
  double survival_mass = 0.0;  // delta product over the whole adopted sequence
};

struct EvalResult {
  double value = 0.0;
  EvalMode mode = EvalMode::ExactEq1;
  std::uint64_t trials = 0;  // Monte Carlo only
  double std_error = 0.0;    // sample standard deviation / sqrt(trials)
  double mean_solution_size = 0.0;
  double solution_size_sd = 0.0;  // per-episode spread (Monte Carlo only)
  std::vector<double> group_pct;  // indexed by group tag - 1, values in [0,100]
  std::vector<RealizationBreakdown> breakdown;  // exact modes, on request
};

struct EpisodeTrace {
  std::uint64_t round = 0;
  std::string policy;  // component actually run this episode
  Realization phi;
  ItemSequence selected;
  std::optional<std::size_t> died_after;  // 1-based count; nullopt = survived
  double credited = 0.0;
  std::vector<int> group_counts;  // selected items per group tag
};

// Longest sequence the policy can select under phi: runs next() feeding
// states from phi until Stop or exhaustion. Throws ContractViolation if the
// policy re-emits a selected item.
inline ItemSequence adopted_sequence(const Policy& policy,
                                     const Instance& inst,
                                     const Realization& phi) {
  ItemSequence seq;
  PartialRealization psi;
  while (auto i = policy.next(psi)) {
    if (psi.contains(*i))
      throw ContractViolation("policy " + std::string(policy.name()) +
                              " re-emitted item " + std::to_string(*i));
    detail::require_valid_observation(inst, *i, 0);
    seq.push_back(*i);
    psi.push(*i, phi.at(*i));
    if (seq.size() > inst.size())
      throw ContractViolation("policy exceeded the ground set");
  }
  return seq;
}

struct ExactOptions {
  bool want_breakdown = false;
  bool credit_survivors = false;  // diagnostic, off for the analyzed objective
  std::size_t max_expand_items = 12;
};

namespace detail {

struct GroupSizes {
  std::vector<double> size;  // per group tag - 1
  explicit GroupSizes(const Instance& inst) {
    size.assign(static_cast<std::size_t>(std::max(inst.group_count(), 1)), 0.0);
    for (const auto& it : inst.items) {
      if (it.group >= 1) size[static_cast<std::size_t>(it.group - 1)] += 1.0;
    }
  }
};

}  // namespace detail

// Exact expected utility of a deterministic policy under the death-position
// objective. Requires a tabular prior or a product prior small enough to
// expand.
inline EvalResult exact_favg(const Policy& policy, const Instance& inst,
                             const UtilityModel& utility,
                             const ExactOptions& opt = {}) {
  const TabularPrior prior = inst.tabular_expansion(opt.max_expand_items);
  const detail::GroupSizes groups(inst);
  EvalResult out;
  out.mode = EvalMode::ExactEq1;
  out.group_pct.assign(groups.size.size(), 0.0);
  std::vector<double> group_count(groups.size.size(), 0.0);
  for (std::size_t e = 0; e < prior.entries.size(); ++e) {
    const TabularEntry& en = prior.entries[e];
    const ItemSequence seq = adopted_sequence(policy, inst, en.phi);
    RealizationBreakdown bd;
    bd.realization_index = e;
    bd.probability = en.weight;
    bd.adopted = seq;
    double surv = 1.0;
    double value_r = 0.0, size_r = 0.0;
    std::vector<double> count_r(groups.size.size(), 0.0);
    std::vector<double> running(groups.size.size(), 0.0);
    ItemSequence prefix;
    prefix.reserve(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const ItemId i = seq[k];
      prefix.push_back(i);
      running[static_cast<std::size_t>(inst.item(i).group - 1)] += 1.0;
      const double delta = inst.delta(i);
      const double w = surv * (1.0 - delta);
      const double f = utility.value(prefix, en.phi);
      value_r += w * f;
      size_r += w * static_cast<double>(k + 1);
      for (std::size_t g = 0; g < running.size(); ++g)
        count_r[g] += w * running[g];
      if (opt.want_breakdown) bd.death_points.push_back({k + 1, w, f});
      surv *= delta;
    }
    // Surviving the whole adopted sequence: the full set was selected but,
    // under the analyzed objective, credits nothing.
    size_r += surv * static_cast<double>(seq.size());
    for (std::size_t g = 0; g < running.size(); ++g)
      count_r[g] += surv * running[g];
    if (opt.credit_survivors && !seq.empty())
      value_r += surv * utility.value(seq, en.phi);
    bd.survival_mass = surv;
    out.value += en.weight * value_r;
    out.mean_solution_size += en.weight * size_r;
    for (std::size_t g = 0; g < group_count.size(); ++g)
      group_count[g] += en.weight * count_r[g];
    if (opt.want_breakdown) out.breakdown.push_back(std::move(bd));
  }
  for (std::size_t g = 0; g < group_count.size(); ++g)
    out.group_pct[g] =
        groups.size[g] > 0.0 ? 100.0 * group_count[g] / groups.size[g] : 0.0;
  return out;
}

// Expected utility assuming the process is never dead: E_phi[f(S_policy, phi)].
inline EvalResult exact_favg_nodeath(const Policy& policy,
                                     const Instance& inst,
                                     const UtilityModel& utility,
                                     const ExactOptions& opt = {}) {
  const TabularPrior prior = inst.tabular_expansion(opt.max_expand_items);
  const detail::GroupSizes groups(inst);
  EvalResult out;
  out.mode = EvalMode::ExactNoDeath;
  out.group_pct.assign(groups.size.size(), 0.0);
  std::vector<double> group_count(groups.size.size(), 0.0);
  for (std::size_t e = 0; e < prior.entries.size(); ++e) {
    const TabularEntry& en = prior.entries[e];
    const ItemSequence seq = adopted_sequence(policy, inst, en.phi);
    out.value += en.weight * utility.value(seq, en.phi);
    out.mean_solution_size += en.weight * static_cast<double>(seq.size());
    for (ItemId i : seq)
      group_count[static_cast<std::size_t>(inst.item(i).group - 1)] +=
          en.weight;
    if (opt.want_breakdown) {
      RealizationBreakdown bd;
      bd.realization_index = e;
      bd.probability = en.weight;
      bd.adopted = seq;
      bd.survival_mass = 1.0;
      out.breakdown.push_back(std::move(bd));
    }
  }
  for (std::size_t g = 0; g < group_count.size(); ++g)
    out.group_pct[g] =
        groups.size[g] > 0.0 ? 100.0 * group_count[g] / groups.size[g] : 0.0;
  return out;
}

namespace detail {

inline EvalResult combine_mixture(
    const MixturePolicy& mixture,
    const std::function<EvalResult(const Policy&)>& eval_one, EvalMode mode) {
  EvalResult out;
  out.mode = mode;
  bool first = true;
  for (const auto& comp : mixture.components()) {
    const EvalResult r = eval_one(*comp.policy);
    if (first) {
      out.group_pct.assign(r.group_pct.size(), 0.0);
      first = false;
    }
    out.value += comp.weight * r.value;
    out.mean_solution_size += comp.weight * r.mean_solution_size;
    for (std::size_t g = 0; g < out.group_pct.size(); ++g)
      out.group_pct[g] += comp.weight * r.group_pct[g];
  }
  return out;
}

}  // namespace detail

// Mixtures are evaluated exactly as the weighted combination of their
// components; the mixture coin is never sampled on the exact path.
inline EvalResult exact_favg(const MixturePolicy& mixture,
                             const Instance& inst, const UtilityModel& utility,
                             const ExactOptions& opt = {}) {
  if (mixture.components().size() == 1)
    return exact_favg(*mixture.components()[0].policy, inst, utility, opt);
  ExactOptions sub = opt;
  sub.want_breakdown = false;
  return detail::combine_mixture(
      mixture,
      [&](const Policy& p) { return exact_favg(p, inst, utility, sub); },
      EvalMode::ExactEq1);
}

inline EvalResult exact_favg_nodeath(const MixturePolicy& mixture,
                                     const Instance& inst,
                                     const UtilityModel& utility,
                                     const ExactOptions& opt = {}) {
  if (mixture.components().size() == 1)
    return exact_favg_nodeath(*mixture.components()[0].policy, inst, utility,
                              opt);
  ExactOptions sub = opt;
  sub.want_breakdown = false;
  return detail::combine_mixture(
      mixture,
      [&](const Policy& p) {
        return exact_favg_nodeath(p, inst, utility, sub);
      },
      EvalMode::ExactNoDeath);
}

// Deterministic pairwise summation; the reduction tree depends only on the
// element count, never on thread count.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

struct SimulateOptions {
  std::uint64_t rounds = 1000;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = available parallelism
  bool credit_survivors = false;
  std::size_t trace_limit = 0;  // keep traces for the first N rounds
};

struct SimulateResult {
  EvalResult result;
  std::vector<EpisodeTrace> traces;
};

// Round-keyed policy source; lets experiment baselines re-seed per episode.
using PolicyFactory = std::function<MixturePolicy(std::uint64_t round)>;

// Seeded Monte Carlo estimate of the death-position objective. Per round r,
// three substreams are derived from (seed, r): purpose 0 draws the
// realization, purpose 1 the mixture component, purpose 2 the continuation
// coins. Rounds are independent, so they are partitioned across threads and
// reduced in round-index order.
inline SimulateResult simulate(const PolicyFactory& policies,
                               const Instance& inst,
                               const UtilityModel& utility,
                               const SimulateOptions& opt) {
  if (opt.rounds < 1) throw InvalidInput("simulate requires rounds >= 1");
  const std::uint64_t n = opt.rounds;
  const detail::GroupSizes groups(inst);
  const std::size_t ng = groups.size.size();

  // Cumulative weights for tabular sampling.
  const TabularPrior* tab = inst.tabular();
  std::vector<double> cum;
  if (tab) {
    cum.reserve(tab->entries.size());
    double acc = 0.0;
    for (const auto& en : tab->entries) {
      acc += en.weight;
      cum.push_back(acc);
    }
    cum.back() = std::max(cum.back(), 1.0);
  }

  std::vector<double> values(n), sizes(n);
  std::vector<double> group_frac(n * ng);
  std::vector<EpisodeTrace> traces(
      std::min<std::uint64_t>(opt.trace_limit, n));

  auto run_round = [&](std::uint64_t r) {
    SplitMix64 phi_rng = substream(opt.seed, {r, 0});
    SplitMix64 coin_rng = substream(opt.seed, {r, 1});
    SplitMix64 cont_rng = substream(opt.seed, {r, 2});

    Realization phi;
    if (tab) {
      const double u = phi_rng.next_double();
      std::size_t lo = 0, hi = cum.size() - 1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cum[mid])
          hi = mid;
        else
          lo = mid + 1;
      }
      phi = tab->entries[lo].phi;
    } else {
      const ProductPrior& p = *inst.product();
      phi.states.resize(inst.size());
      for (std::size_t j = 0; j < inst.size(); ++j) {
        const double u = phi_rng.next_double();
        double acc = 0.0;
        StateId s = 0;
        for (std::size_t t = 0; t < p.dists[j].size(); ++t) {
          acc += p.dists[j][t];
          if (u < acc) {
            s = static_cast<StateId>(t);
            break;
          }
          if (t + 1 == p.dists[j].size()) s = static_cast<StateId>(t);
        }
        phi.states[j] = s;
      }
    }

    const MixturePolicy mixture = policies(r);
    std::size_t comp = 0;
    if (mixture.components().size() > 1) {
      const double u = coin_rng.next_double();
      double acc = 0.0;
      for (std::size_t c = 0; c < mixture.components().size(); ++c) {
        acc += mixture.components()[c].weight;
        comp = c;
        if (u < acc) break;
      }
    }
    const Policy& policy = *mixture.components()[comp].policy;

    PartialRealization psi;
    ItemSequence selected;
    std::optional<std::size_t> died_after;
    while (auto i = policy.next(psi)) {
      if (psi.contains(*i))
        throw ContractViolation("policy " + std::string(policy.name()) +
                                " re-emitted item " + std::to_string(*i));
      selected.push_back(*i);
      psi.push(*i, phi.at(*i));
      const double live = cont_rng.next_double();
      if (!(live < inst.delta(*i))) {
        died_after = selected.size();
        break;
      }
    }
    double credited = 0.0;
    if (died_after)
      credited = utility.value(selected, phi);
    else if (opt.credit_survivors && !selected.empty())
      credited = utility.value(selected, phi);

    values[r] = credited;
    sizes[r] = static_cast<double>(selected.size());
    std::vector<int> gcount(ng, 0);
    for (ItemId i : selected)
      gcount[static_cast<std::size_t>(inst.item(i).group - 1)] += 1;
    for (std::size_t g = 0; g < ng; ++g)
      group_frac[r * ng + g] =
          groups.size[g] > 0.0 ? 100.0 * gcount[g] / groups.size[g] : 0.0;

    if (r < traces.size()) {
      EpisodeTrace& tr = traces[r];
      tr.round = r;
      tr.policy = std::string(policy.name());
      tr.phi = phi;
      tr.selected = selected;
      tr.died_after = died_after;
      tr.credited = credited;
      tr.group_counts = gcount;
    }
  };

  unsigned workers = opt.threads > 0
                         ? static_cast<unsigned>(opt.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, n));
  if (workers <= 1) {
    for (std::uint64_t r = 0; r < n; ++r) run_round(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = n * w / workers;
      const std::uint64_t hi = n * (w + 1) / workers;
      pool.emplace_back([&, lo, hi] {
        try {
          for (std::uint64_t r = lo; r < hi; ++r) run_round(r);
        } catch (...) {
          std::scoped_lock lk(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  SimulateResult out;
  out.result.mode = EvalMode::MonteCarlo;
  out.result.trials = n;
  out.result.value = pairwise_sum(values) / static_cast<double>(n);
  out.result.mean_solution_size = pairwise_sum(sizes) / static_cast<double>(n);
  out.result.group_pct.resize(ng);
  std::vector<double> scratch(n);
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::uint64_t r = 0; r < n; ++r) scratch[r] = group_frac[r * ng + g];
    out.result.group_pct[g] = pairwise_sum(scratch) / static_cast<double>(n);
  }
  if (n > 1) {
    for (std::uint64_t r = 0; r < n; ++r) {
      const double d = values[r] - out.result.value;
      scratch[r] = d * d;
    }
    const double var = pairwise_sum(scratch) / static_cast<double>(n - 1);
    out.result.std_error = std::sqrt(var / static_cast<double>(n));
    for (std::uint64_t r = 0; r < n; ++r) {
      const double d = sizes[r] - out.result.mean_solution_size;
      scratch[r] = d * d;
    }
    out.result.solution_size_sd =
        std::sqrt(pairwise_sum(scratch) / static_cast<double>(n - 1));
  }
  out.traces = std::move(traces);
  return out;
}

inline SimulateResult simulate(const MixturePolicy& mixture,
                               const Instance& inst,
                               const UtilityModel& utility,
                               const SimulateOptions& opt) {
  return simulate([&](std::uint64_t) { return mixture; }, inst, utility, opt);
}

inline SimulateResult simulate(const Policy& policy, const Instance& inst,
                               const UtilityModel& utility,
                               const SimulateOptions& opt) {
  return simulate(MixturePolicy::pure(PolicyPtr(&policy, [](const Policy*) {})),
                  inst, utility, opt);
}

}  // namespace cascade
