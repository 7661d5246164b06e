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
// Core model: items with continuation probabilities, state realizations,
// partial realizations (the observations made so far), and priors over
// realizations with exact conditional-probability queries.
//
// All types are immutable after construction and safe to share across
// threads; the operations are pure functions.
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cascade/rng.hpp"

namespace cascade {

using ItemId = std::int32_t;
using StateId = std::int32_t;

// Error taxonomy. Loaders throw ParseError with path context; operations
// throw InvalidInput / ConditioningOnNull / ResourceLimit; a policy that
// emits an already-selected item surfaces as ContractViolation.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInput : Error {
  using Error::Error;
};
struct ConditioningOnNull : Error {
  using Error::Error;
};
struct ResourceLimit : Error {
  using Error::Error;
};
struct ContractViolation : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// Absolute tolerance for probability normalization checks.
inline constexpr double kProbTolerance = 1e-9;

struct Item {
  ItemId id = 0;
  double delta = 1.0;  // continuation probability, in [0, 1]
  int group = 1;       // experiment bookkeeping tag, 1-based
};

// A complete assignment of a state to every item, indexed by item id.
struct Realization {
  std::vector<StateId> states;

  StateId at(ItemId i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= states.size())
      throw InvalidInput("realization: unknown item id " + std::to_string(i));
    return states[static_cast<std::size_t>(i)];
  }

  bool operator==(const Realization&) const = default;
};

// Ordered record of the (item, state) observations made so far. Item ids are
// pairwise distinct; equality of the information state is equality of the
// unordered observation set.
class PartialRealization {
 public:
  struct Observation {
    ItemId item;
    StateId state;
    bool operator==(const Observation&) const = default;
  };

  PartialRealization() = default;
  explicit PartialRealization(std::vector<Observation> obs) {
    for (const auto& o : obs) push(o.item, o.state);
  }

  bool contains(ItemId i) const {
    for (const auto& o : obs_)
      if (o.item == i) return true;
    return false;
  }

  std::optional<StateId> state_of(ItemId i) const {
    for (const auto& o : obs_)
      if (o.item == i) return o.state;
    return std::nullopt;
  }

  void push(ItemId i, StateId s) {
    if (contains(i))
      throw InvalidInput("duplicate observation of item " + std::to_string(i));
    obs_.push_back({i, s});
  }

  PartialRealization extended(ItemId i, StateId s) const {
    PartialRealization out = *this;
    out.push(i, s);
    return out;
  }

  // Removes the most recent observation; pairs with push() in tree searches.
  void pop_last() {
    if (obs_.empty()) throw InvalidInput("pop_last on empty observation list");
    obs_.pop_back();
  }

  std::size_t size() const { return obs_.size(); }
  bool empty() const { return obs_.empty(); }
  std::span<const Observation> observations() const { return obs_; }

  // Selected item ids, in observation order.
  std::vector<ItemId> domain() const {
    std::vector<ItemId> d;
    d.reserve(obs_.size());
    for (const auto& o : obs_) d.push_back(o.item);
    return d;
  }

  // Observations sorted by item id; the canonical form of the unordered set.
  std::vector<Observation> canonical() const {
    std::vector<Observation> c(obs_.begin(), obs_.end());
    std::sort(c.begin(), c.end(),
              [](const Observation& a, const Observation& b) {
                return a.item < b.item;
              });
    return c;
  }

  std::uint64_t canonical_hash() const {
    std::uint64_t h = mix64(0x70736921ull + obs_.size());
    for (const auto& o : canonical()) {
      h = mix64(h + kGolden + static_cast<std::uint64_t>(o.item));
      h = mix64(h + kGolden + static_cast<std::uint64_t>(o.state));
    }
    return h;
  }

  // Equality on the unordered observation set.
  friend bool operator==(const PartialRealization& a,
                         const PartialRealization& b) {
    return a.canonical() == b.canonical();
  }

 private:
  std::vector<Observation> obs_;
};

struct TabularEntry {
  double weight = 0.0;  // > 0; entries sum to 1 within kProbTolerance
  Realization phi;
};

struct TabularPrior {
  std::vector<TabularEntry> entries;
};

struct ProductPrior {
  // dists[item][state]; each row sums to 1 within kProbTolerance.
  std::vector<std::vector<double>> dists;
};

using Prior = std::variant<TabularPrior, ProductPrior>;

struct Instance {
  std::vector<Item> items;
  StateId state_alphabet = 2;  // shared state alphabet size
  Prior prior;

  std::size_t size() const { return items.size(); }

  const Item& item(ItemId i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= items.size())
      throw InvalidInput("unknown item id " + std::to_string(i));
    return items[static_cast<std::size_t>(i)];
  }

  double delta(ItemId i) const { return item(i).delta; }

  std::vector<double> deltas() const {
    std::vector<double> d;
    d.reserve(items.size());
    for (const auto& it : items) d.push_back(it.delta);
    return d;
  }

  double delta_product() const {
    double p = 1.0;
    for (const auto& it : items) p *= it.delta;
    return p;
  }

  const TabularPrior* tabular() const {
    return std::get_if<TabularPrior>(&prior);
  }
  const ProductPrior* product() const {
    return std::get_if<ProductPrior>(&prior);
  }

  int group_count() const {
    int g = 0;
    for (const auto& it : items) g = std::max(g, it.group);
    return g;
  }

  // Checks every structural invariant; throws InvalidInput on the first
  // violation. Loaders report the same conditions with JSON path context.
  void validate() const;

  // Tabular view of the prior. Product priors are expanded state-by-state,
  // guarded by an item cap (expansion is exponential).
  TabularPrior tabular_expansion(std::size_t max_items = 12) const;
};

inline void Instance::validate() const {
  const std::size_t m = items.size();
  if (state_alphabet < 1) throw InvalidInput("state alphabet must be >= 1");
  for (std::size_t j = 0; j < m; ++j) {
    const Item& it = items[j];
    if (static_cast<std::size_t>(it.id) != j)
      throw InvalidInput("item ids must be dense from 0; found id " +
                         std::to_string(it.id) + " at position " +
                         std::to_string(j));
    if (!(it.delta >= 0.0 && it.delta <= 1.0))
      throw InvalidInput("item " + std::to_string(it.id) +
                         ": delta outside [0,1]");
  }
  if (const TabularPrior* t = tabular()) {
    if (t->entries.empty()) throw InvalidInput("tabular prior has no entries");
    double sum = 0.0;
    for (std::size_t e = 0; e < t->entries.size(); ++e) {
      const TabularEntry& en = t->entries[e];
      if (!(en.weight > 0.0))
        throw InvalidInput("prior entry " + std::to_string(e) +
                           ": weight must be > 0");
      sum += en.weight;
      if (en.phi.states.size() != m)
        throw InvalidInput("prior entry " + std::to_string(e) +
                           ": realization must assign a state to every item");
      for (StateId s : en.phi.states)
        if (s < 0 || s >= state_alphabet)
          throw InvalidInput("prior entry " + std::to_string(e) +
                             ": state id out of range");
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw InvalidInput("tabular prior weights sum to " +
                         std::to_string(sum) + ", expected 1");
  } else {
    const ProductPrior& p = *product();
    if (p.dists.size() != m)
      throw InvalidInput("product prior must have one distribution per item");
    for (std::size_t j = 0; j < m; ++j) {
      if (p.dists[j].size() != static_cast<std::size_t>(state_alphabet))
        throw InvalidInput("product prior item " + std::to_string(j) +
                           ": distribution size must equal state alphabet");
      double sum = 0.0;
      for (double q : p.dists[j]) {
        if (q < 0.0)
          throw InvalidInput("product prior item " + std::to_string(j) +
                             ": negative probability");
        sum += q;
      }
      if (std::abs(sum - 1.0) > kProbTolerance)
        throw InvalidInput("product prior item " + std::to_string(j) +
                           ": probabilities sum to " + std::to_string(sum));
    }
  }
}

inline TabularPrior Instance::tabular_expansion(std::size_t max_items) const {
  if (const TabularPrior* t = tabular()) return *t;
  const ProductPrior& p = *product();
  const std::size_t m = items.size();
  if (m > max_items)
    throw ResourceLimit("product prior expansion limited to " +
                        std::to_string(max_items) + " items, instance has " +
                        std::to_string(m));
  TabularPrior out;
  Realization phi;
  phi.states.assign(m, 0);
  // Depth-first enumeration in lexicographic state order.
  std::vector<StateId> cursor(m, 0);
  for (;;) {
    double w = 1.0;
    for (std::size_t j = 0; j < m; ++j) w *= p.dists[j][cursor[j]];
    if (w > 0.0) {
      phi.states.assign(cursor.begin(), cursor.end());
      out.entries.push_back({w, phi});
    }
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++cursor[j] < state_alphabet) break;
      cursor[j] = 0;
      if (j == 0) return out;
    }
    if (m == 0) return out;
  }
}

// --- Consistency queries ---------------------------------------------------

namespace detail {
inline void require_valid_observation(const Instance& inst, ItemId i,
                                      StateId s) {
  if (i < 0 || static_cast<std::size_t>(i) >= inst.size())
    throw InvalidInput("unknown item id " + std::to_string(i));
  if (s < 0 || s >= inst.state_alphabet)
    throw InvalidInput("state id " + std::to_string(s) +
                       " outside alphabet of size " +
                       std::to_string(inst.state_alphabet));
}
}  // namespace detail

// True iff phi agrees with psi on every observed item.
inline bool is_consistent(const Instance& inst, const Realization& phi,
                          const PartialRealization& psi) {
  for (const auto& o : psi.observations()) {
    detail::require_valid_observation(inst, o.item, o.state);
    if (phi.at(o.item) != o.state) return false;
  }
  return true;
}

// True iff dom(a) is contained in dom(b) and the states agree on dom(a).
inline bool is_subrealization(const Instance& inst,
                              const PartialRealization& a,
                              const PartialRealization& b) {
  for (const auto& o : a.observations()) {
    detail::require_valid_observation(inst, o.item, o.state);
    auto s = b.state_of(o.item);
    if (!s || *s != o.state) return false;
  }
  return true;
}

// Total prior mass of realizations consistent with psi.
inline double prob_of_observation(const Instance& inst,
                                  const PartialRealization& psi) {
  if (const TabularPrior* t = inst.tabular()) {
    double mass = 0.0;
    for (const auto& en : t->entries)
      if (is_consistent(inst, en.phi, psi)) mass += en.weight;
    return mass;
  }
  const ProductPrior& p = *inst.product();
  double mass = 1.0;
  for (const auto& o : psi.observations()) {
    detail::require_valid_observation(inst, o.item, o.state);
    mass *= p.dists[static_cast<std::size_t>(o.item)]
                   [static_cast<std::size_t>(o.state)];
  }
  return mass;
}

// Conditional distribution over realizations given psi, as a tabular prior.
// Product priors are expanded first (item-cap guarded).
inline TabularPrior posterior(const Instance& inst,
                              const PartialRealization& psi,
                              std::size_t max_expand_items = 12) {
  TabularPrior base = inst.tabular_expansion(max_expand_items);
  TabularPrior out;
  double mass = 0.0;
  for (const auto& en : base.entries) {
    if (is_consistent(inst, en.phi, psi)) {
      out.entries.push_back(en);
      mass += en.weight;
    }
  }
  if (!(mass > 0.0))
    throw ConditioningOnNull("conditioning on a zero-probability observation");
  for (auto& en : out.entries) en.weight /= mass;
  return out;
}

// Posterior distribution of item i's state given psi; indexed by state id.
inline std::vector<double> state_posterior(const Instance& inst, ItemId i,
                                           const PartialRealization& psi) {
  detail::require_valid_observation(inst, i, 0);
  std::vector<double> q(static_cast<std::size_t>(inst.state_alphabet), 0.0);
  if (auto s = psi.state_of(i)) {
    q[static_cast<std::size_t>(*s)] = 1.0;
    return q;
  }
  if (const TabularPrior* t = inst.tabular()) {
    double mass = 0.0;
    for (const auto& en : t->entries) {
      if (is_consistent(inst, en.phi, psi)) {
        q[static_cast<std::size_t>(en.phi.at(i))] += en.weight;
        mass += en.weight;
      }
    }
    if (!(mass > 0.0))
      throw ConditioningOnNull(
          "conditioning on a zero-probability observation");
    for (double& v : q) v /= mass;
    return q;
  }
  // Independent states: the observation does not move item i's distribution.
  return inst.product()->dists[static_cast<std::size_t>(i)];
}

}  // namespace cascade
