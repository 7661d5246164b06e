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
// Stochastic utility models f(S, phi) >= 0 with f(empty, .) = 0, their
// conditional expected utility given the observations so far, and the
// conditional marginal gain of adding one more item.
//
// The abstract contract does not assume monotonicity or submodularity; the
// checkers in oracle.hpp verify those per instance.
//

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/core.hpp"

namespace cascade {

class UtilityModel {
 public:
  explicit UtilityModel(const Instance& inst) : instance_(&inst) {}
  virtual ~UtilityModel() = default;

  virtual std::string_view name() const = 0;

  // f(S, phi). Must not depend on the order of `selected`.
  virtual double value(std::span<const ItemId> selected,
                       const Realization& phi) const = 0;

  // Expected utility of the selected set under the posterior given psi.
  // The default computes the expectation over the tabular posterior;
  // implementations may override with a closed form.
  virtual double conditional_utility(const PartialRealization& psi) const {
    const TabularPrior post = posterior(*instance_, psi);
    const std::vector<ItemId> dom = psi.domain();
    double v = 0.0;
    for (const auto& en : post.entries) v += en.weight * value(dom, en.phi);
    return v;
  }

  // Expected marginal gain of selecting item i given the observations psi.
  virtual double marginal_gain(ItemId i, const PartialRealization& psi) const {
    require_unselected(i, psi);
    const TabularPrior post = posterior(*instance_, psi);
    std::vector<ItemId> dom = psi.domain();
    double base = 0.0;
    for (const auto& en : post.entries) base += en.weight * value(dom, en.phi);
    dom.push_back(i);
    double extended = 0.0;
    for (const auto& en : post.entries)
      extended += en.weight * value(dom, en.phi);
    return extended - base;
  }

  // Gains for several candidates at the same psi. Worth overriding when the
  // per-candidate work shares a filtering pass.
  virtual void marginal_gains(std::span<const ItemId> candidates,
                              const PartialRealization& psi,
                              std::span<double> out) const {
    for (std::size_t j = 0; j < candidates.size(); ++j)
      out[j] = marginal_gain(candidates[j], psi);
  }

  const Instance& instance() const { return *instance_; }

 protected:
  void require_unselected(ItemId i, const PartialRealization& psi) const {
    detail::require_valid_observation(*instance_, i, 0);
    if (psi.contains(i))
      throw InvalidInput("item " + std::to_string(i) + " already observed");
  }

  const Instance* instance_;
};

// Version-space reduction. The tabular prior entries are the hypotheses;
// f(S, phi) is the prior mass of hypotheses that disagree with phi somewhere
// on S, i.e. the mass eliminated from the version space. The realized
// hypothesis is never eliminated, so values stay below 1 - p(h*).
class VersionSpaceUtility final : public UtilityModel {
 public:
  explicit VersionSpaceUtility(const Instance& inst) : UtilityModel(inst) {
    if (!inst.tabular())
      throw InvalidInput(
          "version-space utility requires a tabular prior (hypotheses)");
  }

  std::string_view name() const override { return "version-space"; }

  double value(std::span<const ItemId> selected,
               const Realization& phi) const override {
    double alive = 0.0;
    for (const auto& en : instance_->tabular()->entries) {
      bool agrees = true;
      for (ItemId i : selected) {
        if (en.phi.at(i) != phi.at(i)) {
          agrees = false;
          break;
        }
      }
      if (agrees) alive += en.weight;
    }
    return 1.0 - alive;
  }

  // All hypotheses consistent with psi project identically onto dom(psi), so
  // the conditional utility collapses to 1 - (consistent mass).
  double conditional_utility(const PartialRealization& psi) const override {
    return 1.0 - consistent_mass(psi);
  }

  double marginal_gain(ItemId i, const PartialRealization& psi) const override {
    require_unselected(i, psi);
    std::vector<double> bucket(
        static_cast<std::size_t>(instance_->state_alphabet), 0.0);
    double mass = 0.0;
    for (const auto& en : instance_->tabular()->entries) {
      if (is_consistent(*instance_, en.phi, psi)) {
        bucket[static_cast<std::size_t>(en.phi.at(i))] += en.weight;
        mass += en.weight;
      }
    }
    if (!(mass > 0.0))
      throw ConditioningOnNull(
          "conditioning on a zero-probability observation");
    return gain_from_buckets(bucket, mass);
  }

  void marginal_gains(std::span<const ItemId> candidates,
                      const PartialRealization& psi,
                      std::span<double> out) const override {
    // One consistency pass shared by all candidates.
    std::vector<const TabularEntry*> alive;
    double mass = 0.0;
    for (const auto& en : instance_->tabular()->entries) {
      if (is_consistent(*instance_, en.phi, psi)) {
        alive.push_back(&en);
        mass += en.weight;
      }
    }
    if (!(mass > 0.0))
      throw ConditioningOnNull(
          "conditioning on a zero-probability observation");
    std::vector<double> bucket(
        static_cast<std::size_t>(instance_->state_alphabet), 0.0);
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      require_unselected(candidates[j], psi);
      std::fill(bucket.begin(), bucket.end(), 0.0);
      for (const TabularEntry* en : alive)
        bucket[static_cast<std::size_t>(en->phi.at(candidates[j]))] +=
            en->weight;
      out[j] = gain_from_buckets(bucket, mass);
    }
  }

 private:
  double consistent_mass(const PartialRealization& psi) const {
    double mass = 0.0;
    for (const auto& en : instance_->tabular()->entries)
      if (is_consistent(*instance_, en.phi, psi)) mass += en.weight;
    if (!(mass > 0.0))
      throw ConditioningOnNull(
          "conditioning on a zero-probability observation");
    return mass;
  }

  // With per-state consistent masses m_s summing to `mass`, the expected
  // newly eliminated mass is mass - sum_s m_s^2 / mass.
  static double gain_from_buckets(const std::vector<double>& bucket,
                                  double mass) {
    double sq = 0.0;
    for (double b : bucket) sq += b * b;
    return mass - sq / mass;
  }
};

// Modular utility: f(S, phi) = sum over i in S of w(i, phi_i), with a
// nonnegative per-(item, state) weight table. With independent states this is
// the standard synthetic benchmark utility.
class AdditiveStateUtility final : public UtilityModel {
 public:
  AdditiveStateUtility(const Instance& inst,
                       std::vector<std::vector<double>> weights)
      : UtilityModel(inst), weights_(std::move(weights)) {
    if (weights_.size() != inst.size())
      throw InvalidInput("additive utility needs one weight row per item");
    for (std::size_t j = 0; j < weights_.size(); ++j) {
      if (weights_[j].size() != static_cast<std::size_t>(inst.state_alphabet))
        throw InvalidInput("additive utility item " + std::to_string(j) +
                           ": weight row size must equal state alphabet");
      for (double w : weights_[j])
        if (w < 0.0)
          throw InvalidInput("additive utility item " + std::to_string(j) +
                             ": negative weight");
    }
  }

  std::string_view name() const override { return "additive"; }

  double value(std::span<const ItemId> selected,
               const Realization& phi) const override {
    double v = 0.0;
    for (ItemId i : selected)
      v += weights_[static_cast<std::size_t>(i)]
                   [static_cast<std::size_t>(phi.at(i))];
    return v;
  }

  // Observed items have known states, so the conditional utility is exact
  // without touching the posterior.
  double conditional_utility(const PartialRealization& psi) const override {
    if (!(prob_of_observation(*instance_, psi) > 0.0))
      throw ConditioningOnNull(
          "conditioning on a zero-probability observation");
    double v = 0.0;
    for (const auto& o : psi.observations())
      v += weights_[static_cast<std::size_t>(o.item)]
                   [static_cast<std::size_t>(o.state)];
    return v;
  }

  double marginal_gain(ItemId i, const PartialRealization& psi) const override {
    require_unselected(i, psi);
    const std::vector<double> q = state_posterior(*instance_, i, psi);
    double v = 0.0;
    for (std::size_t s = 0; s < q.size(); ++s)
      v += q[s] * weights_[static_cast<std::size_t>(i)][s];
    return v;
  }

  const std::vector<std::vector<double>>& weights() const { return weights_; }

 private:
  std::vector<std::vector<double>> weights_;
};

// h(psi): conditional expected utility of the selected set.
inline double conditional_utility(const UtilityModel& u,
                                  const PartialRealization& psi) {
  return u.conditional_utility(psi);
}

// Delta(i | psi): conditional expected marginal gain.
inline double marginal_gain(const UtilityModel& u, ItemId i,
                            const PartialRealization& psi) {
  return u.marginal_gain(i, psi);
}

}  // namespace cascade
