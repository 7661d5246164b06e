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
// Brute-force optimal adaptive policies by dynamic programming over partial
// realizations, in four variants:
//
//   Unconstrained          max of the death-position objective
//   RhoReachable           every selected item must still be reachable with
//                          probability >= rho when it comes up
//   StronglyRhoReachable   the whole selected set stays reachable with
//                          probability >= rho
//   BudgetNoDeath          no-death objective E[f(S, phi)] under the additive
//                          virtual-cost budget -log rho
//
// The DP state is the unordered observation map; a set-valued utility makes
// order irrelevant to the value-to-go, and the running cost of the selected
// set is itself a function of the observations. Budgets are carried in log
// space as sums of virtual costs, with a small slack toward admitting so that
// exact boundary ties are not spuriously rejected.
//
// The same file provides the definitional checkers (adaptive monotonicity,
// adaptive submodularity, the cascade variant over restricted pools) and the
// relaxation-chain verifier relating the four optima.
//

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/evaluation.hpp"
#include "cascade/policies.hpp"
#include "cascade/sequences.hpp"
#include "cascade/utility.hpp"

namespace cascade {

enum class OracleVariant {
  Unconstrained,
  RhoReachable,
  StronglyRhoReachable,
  BudgetNoDeath,
};

inline std::string_view to_string(OracleVariant v) {
  switch (v) {
    case OracleVariant::Unconstrained: return "none";
    case OracleVariant::RhoReachable: return "rho";
    case OracleVariant::StronglyRhoReachable: return "strong-rho";
    case OracleVariant::BudgetNoDeath: return "budget-nodeath";
  }
  return "?";
}

struct OracleLimits {
  std::size_t max_items = 6;
  StateId max_states = 3;
  std::size_t max_entries = 12;  // tabular entries, after any expansion
};

struct OracleConfig {
  OracleVariant variant = OracleVariant::Unconstrained;
  double rho = 0.0;  // ignored for Unconstrained
  OracleLimits limits;
};

// Violation threshold for the definitional checkers: anything above -1e-9 is
// float noise, anything below is a real counterexample.
inline constexpr double kCheckerSlack = 1e-9;

namespace detail {

// Canonical key of a partial realization: one digit per item in radix
// (alphabet + 1), digit 0 meaning unobserved.
inline std::uint64_t psi_key(const PartialRealization& psi, std::size_t items,
                             StateId alphabet) {
  const std::uint64_t radix = static_cast<std::uint64_t>(alphabet) + 1;
  std::vector<std::uint64_t> digit(items, 0);
  for (const auto& o : psi.observations())
    digit[static_cast<std::size_t>(o.item)] =
        static_cast<std::uint64_t>(o.state) + 1;
  std::uint64_t key = 0;
  for (std::size_t j = items; j > 0; --j) key = key * radix + digit[j - 1];
  return key;
}

inline void enforce_limits(const Instance& inst, const TabularPrior& prior,
                           const OracleLimits& limits) {
  if (inst.size() > limits.max_items)
    throw ResourceLimit("oracle limited to " +
                        std::to_string(limits.max_items) + " items, got " +
                        std::to_string(inst.size()));
  if (inst.state_alphabet > limits.max_states)
    throw ResourceLimit("oracle limited to " +
                        std::to_string(limits.max_states) + " states, got " +
                        std::to_string(inst.state_alphabet));
  if (prior.entries.size() > limits.max_entries)
    throw ResourceLimit("oracle limited to " +
                        std::to_string(limits.max_entries) +
                        " prior entries, got " +
                        std::to_string(prior.entries.size()));
}

}  // namespace detail

struct PlanEntry {
  double value = 0.0;
  std::optional<ItemId> best;  // nullopt = stop
};

struct OptimalPlan {
  OracleVariant variant = OracleVariant::Unconstrained;
  double rho = 0.0;
  double value = 0.0;
  std::size_t items = 0;
  StateId alphabet = 2;
  std::unordered_map<std::uint64_t, PlanEntry> table;
};

// Replays an optimal plan as an ordinary policy. Observation states missing
// from the table (zero-probability branches) fall back to Stop.
class PlanPolicy final : public Policy {
 public:
  explicit PlanPolicy(std::shared_ptr<const OptimalPlan> plan)
      : plan_(std::move(plan)) {}

  std::string_view name() const override { return "oracle-plan"; }

  std::optional<ItemId> next(const PartialRealization& psi) const override {
    const auto it =
        plan_->table.find(detail::psi_key(psi, plan_->items, plan_->alphabet));
    if (it == plan_->table.end()) return std::nullopt;
    return it->second.best;
  }

 private:
  std::shared_ptr<const OptimalPlan> plan_;
};

namespace detail {

struct DpContext {
  const Instance* inst;
  const UtilityModel* utility;
  const TabularPrior* prior;
  OracleVariant variant;
  double log_budget;  // -log rho; +inf when rho == 0
  OptimalPlan* plan;

  // Consistent entry indices are filtered incrementally down the recursion.
  double solve(PartialRealization& psi, std::vector<std::size_t>& alive,
               double mass, double spent) {
    const std::uint64_t key =
        psi_key(psi, inst->size(), inst->state_alphabet);
    if (const auto it = plan->table.find(key); it != plan->table.end())
      return it->second.value;

    const bool nodeath = variant == OracleVariant::BudgetNoDeath;
    PlanEntry entry;
    entry.value = nodeath ? utility->conditional_utility(psi) : 0.0;
    entry.best = std::nullopt;

    for (std::size_t j = 0; j < inst->size(); ++j) {
      const ItemId i = static_cast<ItemId>(j);
      if (psi.contains(i)) continue;
      const double cost = virtual_cost(inst->delta(i));
      switch (variant) {
        case OracleVariant::Unconstrained:
          break;
        case OracleVariant::RhoReachable:
          if (!(spent <= log_budget + kBudgetSlack)) continue;
          break;
        case OracleVariant::StronglyRhoReachable:
        case OracleVariant::BudgetNoDeath:
          if (!(spent + cost <= log_budget + kBudgetSlack)) continue;
          break;
      }
      const double delta = inst->delta(i);
      double action_value = 0.0;
      for (StateId s = 0; s < inst->state_alphabet; ++s) {
        std::vector<std::size_t> sub;
        double sub_mass = 0.0;
        for (std::size_t e : alive) {
          if (prior->entries[e].phi.at(i) == s) {
            sub.push_back(e);
            sub_mass += prior->entries[e].weight;
          }
        }
        if (!(sub_mass > 0.0)) continue;
        const double q = sub_mass / mass;
        psi.push(i, s);
        const double cont = solve(psi, sub, sub_mass, spent + cost);
        double branch;
        if (nodeath) {
          branch = cont;
        } else {
          const double h_now = utility->conditional_utility(psi);
          branch = (1.0 - delta) * h_now + delta * cont;
        }
        action_value += q * branch;
        psi.pop_last();
      }
      if (action_value > entry.value) {
        entry.value = action_value;
        entry.best = i;
      }
    }
    plan->table.emplace(key, entry);
    return entry.value;
  }
};

}  // namespace detail

// Exact optimal value and plan for the requested variant. Limits are enforced
// before solving.
inline OptimalPlan solve(const Instance& inst, const UtilityModel& utility,
                         const OracleConfig& config) {
  if (config.variant != OracleVariant::Unconstrained &&
      !(config.rho >= 0.0 && config.rho <= 1.0))
    throw InvalidInput("rho must lie in [0,1]");
  const TabularPrior prior = inst.tabular_expansion(config.limits.max_items);
  detail::enforce_limits(inst, prior, config.limits);

  OptimalPlan plan;
  plan.variant = config.variant;
  plan.rho = config.rho;
  plan.items = inst.size();
  plan.alphabet = inst.state_alphabet;

  detail::DpContext ctx;
  ctx.inst = &inst;
  ctx.utility = &utility;
  ctx.prior = &prior;
  ctx.variant = config.variant;
  ctx.log_budget = config.rho > 0.0
                       ? -std::log(config.rho)
                       : std::numeric_limits<double>::infinity();
  ctx.plan = &plan;

  PartialRealization psi;
  std::vector<std::size_t> alive(prior.entries.size());
  for (std::size_t e = 0; e < alive.size(); ++e) alive[e] = e;
  double mass = 0.0;
  for (const auto& en : prior.entries) mass += en.weight;
  plan.value = ctx.solve(psi, alive, mass, 0.0);
  return plan;
}

// --- Definitional checkers --------------------------------------------------

struct CheckWitness {
  std::vector<PartialRealization::Observation> psi;
  std::vector<PartialRealization::Observation> psi_prime;
  std::optional<ItemId> item;
  std::vector<ItemId> pool;     // cascade checker only
  std::vector<double> deltas;   // cascade checker only
  double lhs = 0.0, rhs = 0.0;  // violated comparison, lhs < rhs - slack
};

struct CheckReport {
  std::string property;
  bool passed = true;
  double min_slack = std::numeric_limits<double>::infinity();
  std::uint64_t cases = 0;
  std::optional<CheckWitness> witness;
};

namespace detail {

// All positive-probability partial realizations: projections of the prior
// entries onto every subset of items, deduplicated by canonical key.
inline std::vector<PartialRealization> enumerate_psis(
    const Instance& inst, const TabularPrior& prior) {
  std::map<std::uint64_t, PartialRealization> seen;
  const std::size_t m = inst.size();
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    for (const auto& en : prior.entries) {
      PartialRealization psi;
      for (std::size_t j = 0; j < m; ++j)
        if (mask & (1ull << j))
          psi.push(static_cast<ItemId>(j), en.phi.at(static_cast<ItemId>(j)));
      seen.emplace(psi_key(psi, m, inst.state_alphabet), std::move(psi));
    }
  }
  std::vector<PartialRealization> out;
  out.reserve(seen.size());
  for (auto& [key, psi] : seen) out.push_back(std::move(psi));
  return out;
}

inline void record_violation(CheckReport& report, double slack,
                             CheckWitness witness) {
  if (slack < report.min_slack) report.min_slack = slack;
  if (slack < -kCheckerSlack && report.passed) {
    report.passed = false;
    report.witness = std::move(witness);
  }
}

}  // namespace detail

// Adaptive monotonicity: every conditional marginal gain is nonnegative.
inline CheckReport check_adaptive_monotone(const Instance& inst,
                                           const UtilityModel& utility,
                                           const OracleLimits& limits = {}) {
  const TabularPrior prior = inst.tabular_expansion(limits.max_items);
  detail::enforce_limits(inst, prior, limits);
  CheckReport report;
  report.property = "adaptive-monotone";
  for (const PartialRealization& psi : detail::enumerate_psis(inst, prior)) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      const ItemId i = static_cast<ItemId>(j);
      if (psi.contains(i)) continue;
      const double gain = utility.marginal_gain(i, psi);
      ++report.cases;
      CheckWitness w;
      w.psi = psi.canonical();
      w.item = i;
      w.lhs = gain;
      w.rhs = 0.0;
      detail::record_violation(report, gain, std::move(w));
    }
  }
  return report;
}

// Adaptive submodularity: marginal gains weakly shrink as the conditioning
// observations grow.
inline CheckReport check_adaptive_submodular(const Instance& inst,
                                             const UtilityModel& utility,
                                             const OracleLimits& limits = {}) {
  const TabularPrior prior = inst.tabular_expansion(limits.max_items);
  detail::enforce_limits(inst, prior, limits);
  CheckReport report;
  report.property = "adaptive-submodular";
  for (const PartialRealization& big : detail::enumerate_psis(inst, prior)) {
    const auto obs = big.canonical();
    const std::size_t d = obs.size();
    // Sub-realizations of `big` are exactly the positive-probability psis
    // below it.
    for (std::uint64_t sub = 0; sub < (1ull << d); ++sub) {
      PartialRealization small;
      for (std::size_t j = 0; j < d; ++j)
        if (sub & (1ull << j)) small.push(obs[j].item, obs[j].state);
      for (std::size_t j = 0; j < inst.size(); ++j) {
        const ItemId i = static_cast<ItemId>(j);
        if (big.contains(i)) continue;
        const double lhs = utility.marginal_gain(i, small);
        const double rhs = utility.marginal_gain(i, big);
        ++report.cases;
        CheckWitness w;
        w.psi = small.canonical();
        w.psi_prime = big.canonical();
        w.item = i;
        w.lhs = lhs;
        w.rhs = rhs;
        detail::record_violation(report, lhs - rhs, std::move(w));
      }
    }
  }
  return report;
}

namespace detail {

// Best conditional value achievable from `psi` selecting only from `pool`,
// under candidate continuation probabilities `deltas`: credits the selected
// set (including dom(psi)) on death and on completion. Memoized per
// (psi, pool) in `memo`.
struct RestrictedSolve {
  const Instance* inst;
  const UtilityModel* utility;
  std::span<const double> deltas;
  std::map<std::pair<std::uint64_t, std::uint64_t>, double>* memo;

  double value(PartialRealization& psi, std::uint64_t pool_mask) {
    const auto key = std::make_pair(
        psi_key(psi, inst->size(), inst->state_alphabet), pool_mask);
    if (const auto it = memo->find(key); it != memo->end()) return it->second;
    double best = utility->conditional_utility(psi);
    for (std::size_t j = 0; j < inst->size(); ++j) {
      if (!(pool_mask & (1ull << j))) continue;
      const ItemId i = static_cast<ItemId>(j);
      if (psi.contains(i)) continue;
      const std::vector<double> q = state_posterior(*inst, i, psi);
      const double delta = deltas[j];
      double action = 0.0;
      for (StateId s = 0; s < inst->state_alphabet; ++s) {
        if (!(q[static_cast<std::size_t>(s)] > 0.0)) continue;
        psi.push(i, s);
        const double h_now = utility->conditional_utility(psi);
        const double cont = value(psi, pool_mask & ~(1ull << j));
        action += q[static_cast<std::size_t>(s)] *
                  ((1.0 - delta) * h_now + delta * cont);
        psi.pop_last();
      }
      best = std::max(best, action);
    }
    memo->emplace(key, best);
    return best;
  }
};

}  // namespace detail

// Adaptive cascade submodularity, checked on the instance's own continuation
// probabilities plus `delta_samples` random vectors. The universal "for any
// delta" quantifier is sampled, not certified. Doubly exponential: capped at
// 4 items with binary states.
inline CheckReport check_cascade_submodular(const Instance& inst,
                                            const UtilityModel& utility,
                                            int delta_samples,
                                            std::uint64_t seed,
                                            const OracleLimits& limits = {}) {
  if (delta_samples < 0) throw InvalidInput("delta_samples must be >= 0");
  if (inst.size() > 4)
    throw ResourceLimit("cascade checker limited to 4 items, got " +
                        std::to_string(inst.size()));
  if (inst.state_alphabet > 2)
    throw ResourceLimit("cascade checker limited to binary states, got " +
                        std::to_string(inst.state_alphabet));
  const TabularPrior prior = inst.tabular_expansion(limits.max_items);
  detail::enforce_limits(inst, prior, limits);

  CheckReport report;
  report.property = "adaptive-cascade-submodular";
  const std::size_t m = inst.size();

  std::vector<std::vector<double>> delta_vectors;
  delta_vectors.push_back(inst.deltas());
  for (int t = 0; t < delta_samples; ++t) {
    SplitMix64 rng = substream(seed, {static_cast<std::uint64_t>(t)});
    std::vector<double> d(m);
    for (std::size_t j = 0; j < m; ++j) d[j] = rng.next_double();
    delta_vectors.push_back(std::move(d));
  }

  const std::vector<PartialRealization> psis =
      detail::enumerate_psis(inst, prior);
  for (const std::vector<double>& deltas : delta_vectors) {
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> memo;
    detail::RestrictedSolve rs{&inst, &utility, deltas, &memo};
    // side(psi, V) = best restricted value - h(psi)
    auto side = [&](const PartialRealization& psi, std::uint64_t pool) {
      PartialRealization scratch = psi;
      return rs.value(scratch, pool) - utility.conditional_utility(psi);
    };
    for (const PartialRealization& big : psis) {
      const auto obs = big.canonical();
      const std::size_t d = obs.size();
      std::uint64_t dom_mask = 0;
      for (const auto& o : obs) dom_mask |= 1ull << o.item;
      const std::uint64_t free_mask = ((1ull << m) - 1) & ~dom_mask;
      for (std::uint64_t sub = 0; sub < (1ull << d); ++sub) {
        PartialRealization small;
        for (std::size_t j = 0; j < d; ++j)
          if (sub & (1ull << j)) small.push(obs[j].item, obs[j].state);
        // pools are subsets of the items unobserved in the larger psi
        for (std::uint64_t pool = free_mask;;
             pool = (pool - 1) & free_mask) {
          const double lhs = side(small, pool);
          const double rhs = side(big, pool);
          ++report.cases;
          CheckWitness w;
          w.psi = small.canonical();
          w.psi_prime = big.canonical();
          for (std::size_t j = 0; j < m; ++j)
            if (pool & (1ull << j)) w.pool.push_back(static_cast<ItemId>(j));
          w.deltas = deltas;
          w.lhs = lhs;
          w.rhs = rhs;
          detail::record_violation(report, lhs - rhs, std::move(w));
          if (pool == 0) break;
        }
      }
    }
  }
  return report;
}

// --- Relaxation chain -------------------------------------------------------

struct BoundChainReport {
  double rho = 0.0;
  double opt_unconstrained = 0.0;
  double opt_reachable = 0.0;       // best over rho-reachable policies
  double opt_strongly = 0.0;        // best over strongly rho-reachable policies
  double opt_budget_nodeath = 0.0;  // best no-death value under the budget
  double best_singleton = 0.0;      // max_i E[f({i}, phi)]
  bool discard_ok = false;    // opt_reachable >= (1-rho) opt_unconstrained
  bool singleton_ok = false;  // opt_strongly + best_singleton >= opt_reachable
  bool nodeath_ok = false;    // opt_budget_nodeath >= opt_strongly
  std::optional<bool> monotone_ok;  // nullopt = hypothesis check skipped
  std::optional<bool> cascade_ok;

  bool inequalities_hold() const {
    return discard_ok && singleton_ok && nodeath_ok;
  }
  bool hypotheses_ok() const {
    return monotone_ok.value_or(false) && cascade_ok.value_or(false);
  }
};

// Computes the four constrained optima plus the best singleton and asserts
// the relaxation inequalities between them. Hypothesis checks (monotone,
// cascade) run when requested and within limits; a failed or skipped
// hypothesis does not suppress the inequality computation.
inline BoundChainReport verify_bound_chain(const Instance& inst,
                                           const UtilityModel& utility,
                                           double rho, bool run_checks = true,
                                           int cascade_delta_samples = 1,
                                           std::uint64_t seed = 0,
                                           const OracleLimits& limits = {}) {
  BoundChainReport report;
  report.rho = rho;
  OracleConfig cfg;
  cfg.limits = limits;
  cfg.variant = OracleVariant::Unconstrained;
  report.opt_unconstrained = solve(inst, utility, cfg).value;
  cfg.rho = rho;
  cfg.variant = OracleVariant::RhoReachable;
  report.opt_reachable = solve(inst, utility, cfg).value;
  cfg.variant = OracleVariant::StronglyRhoReachable;
  report.opt_strongly = solve(inst, utility, cfg).value;
  cfg.variant = OracleVariant::BudgetNoDeath;
  report.opt_budget_nodeath = solve(inst, utility, cfg).value;

  const PartialRealization empty;
  double best_singleton = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j)
    best_singleton = std::max(
        best_singleton, utility.marginal_gain(static_cast<ItemId>(j), empty));
  report.best_singleton = best_singleton;

  report.discard_ok = report.opt_reachable >=
                      (1.0 - rho) * report.opt_unconstrained - kCheckerSlack;
  report.singleton_ok = report.opt_strongly + report.best_singleton >=
                        report.opt_reachable - kCheckerSlack;
  report.nodeath_ok =
      report.opt_budget_nodeath >= report.opt_strongly - kCheckerSlack;

  if (run_checks) {
    report.monotone_ok = check_adaptive_monotone(inst, utility, limits).passed;
    try {
      report.cascade_ok =
          check_cascade_submodular(inst, utility, cascade_delta_samples, seed,
                                   limits)
              .passed;
    } catch (const ResourceLimit&) {
      report.cascade_ok = std::nullopt;
    }
  }
  return report;
}

}  // namespace cascade
