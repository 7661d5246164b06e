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
// Policies: decision rules mapping the observations made so far to the next
// item to select, or Stop. Every concrete policy here is a pure function of
// the unordered observation set, so traces are reproducible and episodes can
// be evaluated concurrently without shared state.
//
// Shipped policies: fixed sequence, seeded uniform-random baseline, the
// best-singleton-first candidate (pi-a), the benefit-to-cost greedy candidate
// (pi-b), its budget-restricted variant (pi-b-restricted), and the randomized
// greedy-plus mixture of pi-a and pi-b.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/core.hpp"
#include "cascade/rng.hpp"
#include "cascade/sequences.hpp"
#include "cascade/utility.hpp"

namespace cascade {

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;

  // Next item to select given the observations so far, or nullopt to stop.
  // Must never return an item already in dom(psi).
  virtual std::optional<ItemId> next(const PartialRealization& psi) const = 0;
};

using PolicyPtr = std::shared_ptr<const Policy>;

namespace detail {
// Unselected item ids in ascending order.
inline std::vector<ItemId> unselected(const Instance& inst,
                                      const PartialRealization& psi) {
  std::vector<ItemId> out;
  out.reserve(inst.size());
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const ItemId i = static_cast<ItemId>(j);
    if (!psi.contains(i)) out.push_back(i);
  }
  return out;
}
}  // namespace detail

// Selects the items of a fixed sequence in order, skipping any already
// observed; stops when the sequence is exhausted.
class FixedSequencePolicy final : public Policy {
 public:
  FixedSequencePolicy(const Instance& inst, ItemSequence seq)
      : seq_(std::move(seq)) {
    require_valid_sequence(seq_, inst.size());
    name_ = "fixed:";
    for (std::size_t j = 0; j < seq_.size(); ++j) {
      if (j) name_ += ',';
      name_ += std::to_string(seq_[j]);
    }
  }

  std::string_view name() const override { return name_; }

  std::optional<ItemId> next(const PartialRealization& psi) const override {
    for (ItemId i : seq_)
      if (!psi.contains(i)) return i;
    return std::nullopt;
  }

  const ItemSequence& sequence() const { return seq_; }

 private:
  ItemSequence seq_;
  std::string name_;
};

// Uniformly random unselected item, derandomized: the choice is a pure
// function of (seed, |dom(psi)|, canonical hash of psi). Stops only when all
// items are selected.
class RandomPolicy final : public Policy {
 public:
  RandomPolicy(const Instance& inst, std::uint64_t seed)
      : instance_(&inst), seed_(seed) {}

  std::string_view name() const override { return "random"; }

  std::optional<ItemId> next(const PartialRealization& psi) const override {
    const std::vector<ItemId> pool = detail::unselected(*instance_, psi);
    if (pool.empty()) return std::nullopt;
    SplitMix64 rng = substream(seed_, {psi.size(), psi.canonical_hash()});
    return pool[rng.next_below(pool.size())];
  }

 private:
  const Instance* instance_;
  std::uint64_t seed_;
};

// Best-singleton-first candidate: the first pick maximizes the expected
// singleton utility (ties to the smallest id), after which the remaining
// items follow in ascending id order. Never stops while items remain.
class SingletonFirstPolicy final : public Policy {
 public:
  explicit SingletonFirstPolicy(const UtilityModel& utility)
      : utility_(&utility) {
    const Instance& inst = utility.instance();
    const PartialRealization empty;
    double best = -std::numeric_limits<double>::infinity();
    first_ = -1;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      const ItemId i = static_cast<ItemId>(j);
      const double v = utility.marginal_gain(i, empty);
      if (v > best) {
        best = v;
        first_ = i;
      }
    }
  }

  std::string_view name() const override { return "pi-a"; }

  std::optional<ItemId> next(const PartialRealization& psi) const override {
    if (first_ < 0) return std::nullopt;
    if (!psi.contains(first_)) return first_;
    for (ItemId i : detail::unselected(utility_->instance(), psi))
      if (i != first_) return i;
    return std::nullopt;
  }

  ItemId first_pick() const { return first_; }

 private:
  const UtilityModel* utility_;
  ItemId first_ = 0;
};

namespace detail {
// Benefit-to-cost ranking shared by the greedy candidates. Free items (zero
// cost, positive gain) rank above everything, by gain; finite ratios rank by
// value; zero-gain or infinite-cost items rank last with ratio 0. Ties break
// toward larger gain, then smaller id.
inline std::optional<ItemId> best_ratio_item(const UtilityModel& utility,
                                             const PartialRealization& psi) {
  const Instance& inst = utility.instance();
  const std::vector<ItemId> pool = unselected(inst, psi);
  if (pool.empty()) return std::nullopt;
  std::vector<double> gains(pool.size());
  utility.marginal_gains(pool, psi, gains);
  std::optional<ItemId> best;
  double best_ratio = 0.0, best_gain = 0.0;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    const double gain = gains[j];
    const double cost = virtual_cost(inst.delta(pool[j]));
    double ratio;
    if (cost == 0.0) {
      ratio = gain > 0.0   ? std::numeric_limits<double>::infinity()
              : gain == 0.0 ? 0.0
                            : -std::numeric_limits<double>::infinity();
    } else if (std::isinf(cost)) {
      ratio = 0.0;
    } else {
      ratio = gain / cost;
    }
    if (!best || ratio > best_ratio ||
        (ratio == best_ratio && gain > best_gain)) {
      best = pool[j];
      best_ratio = ratio;
      best_gain = gain;
    }
  }
  return best;
}
}  // namespace detail

// Benefit-to-cost greedy candidate: each step selects the unselected item
// with the largest ratio of conditional marginal gain to virtual cost. Never
// stops while items remain; the continuation process is what ends episodes.
class RatioGreedyPolicy final : public Policy {
 public:
  explicit RatioGreedyPolicy(const UtilityModel& utility)
      : utility_(&utility) {}

  std::string_view name() const override { return "pi-b"; }

  std::optional<ItemId> next(const PartialRealization& psi) const override {
    return detail::best_ratio_item(*utility_, psi);
  }

 private:
  const UtilityModel* utility_;
};

// Budget slack toward admitting: float ties at exact budget boundaries must
// not spuriously reject.
inline constexpr double kBudgetSlack = 1e-12;

// Budget-restricted greedy candidate: same ranking as the unrestricted
// greedy, with a running virtual-cost budget of -log rho. The first item that
// would overflow the budget is still selected, once, and then the policy
// stops.
class BudgetedRatioGreedyPolicy final : public Policy {
 public:
  BudgetedRatioGreedyPolicy(const UtilityModel& utility, double rho)
      : utility_(&utility), rho_(rho) {
    if (!(rho > 0.0 && rho <= 1.0))
      throw InvalidInput("restricted greedy requires rho in (0,1]");
    budget_ = -std::log(rho);
  }

  std::string_view name() const override { return "pi-b-restricted"; }

  std::optional<ItemId> next(const PartialRealization& psi) const override {
    // The remaining budget is a function of dom(psi); once it has gone
    // negative the overflow item was already taken.
    double spent = 0.0;
    for (const auto& o : psi.observations())
      spent += virtual_cost(utility_->instance().delta(o.item));
    const double remaining = budget_ - spent;
    if (remaining < -kBudgetSlack) return std::nullopt;
    return detail::best_ratio_item(*utility_, psi);
  }

  double rho() const { return rho_; }

 private:
  const UtilityModel* utility_;
  double rho_;
  double budget_;
};

struct MixtureComponent {
  double weight = 1.0;  // > 0
  PolicyPtr policy;
};

// Weighted mixture over policies. A sampled episode draws one component; the
// exact evaluators combine component values by weight instead of sampling.
class MixturePolicy {
 public:
  explicit MixturePolicy(std::vector<MixtureComponent> parts)
      : parts_(std::move(parts)) {
    if (parts_.empty()) throw InvalidInput("mixture needs a component");
    double sum = 0.0;
    for (const auto& c : parts_) {
      if (!(c.weight > 0.0))
        throw InvalidInput("mixture weights must be > 0");
      if (!c.policy) throw InvalidInput("mixture component missing a policy");
      sum += c.weight;
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw InvalidInput("mixture weights must sum to 1");
  }

  static MixturePolicy pure(PolicyPtr p) {
    std::vector<MixtureComponent> one;
    one.push_back({1.0, std::move(p)});
    return MixturePolicy(std::move(one));
  }

  std::span<const MixtureComponent> components() const { return parts_; }

  std::string name() const {
    if (parts_.size() == 1) return std::string(parts_[0].policy->name());
    std::string out = "mixture(";
    for (std::size_t j = 0; j < parts_.size(); ++j) {
      if (j) out += ", ";
      out += std::string(parts_[j].policy->name());
    }
    out += ")";
    return out;
  }

 private:
  std::vector<MixtureComponent> parts_;
};

// The greedy-plus mixture: the ratio greedy with weight alpha(rho) and the
// best-singleton-first candidate with weight 1 - alpha(rho). Zero-weight
// components are dropped (rho = 0 yields the pure ratio greedy).
inline MixturePolicy greedy_plus(const UtilityModel& utility, double rho) {
  const double a = alpha(rho);
  std::vector<MixtureComponent> parts;
  if (1.0 - a > 0.0)
    parts.push_back({1.0 - a, std::make_shared<SingletonFirstPolicy>(utility)});
  parts.push_back({a, std::make_shared<RatioGreedyPolicy>(utility)});
  return MixturePolicy(std::move(parts));
}

}  // namespace cascade
