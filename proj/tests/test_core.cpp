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

#include <catch2/catch.hpp>

#include "cascade/core.hpp"
#include "test_support.hpp"

using namespace cascade;
using cascade::testing::product_instance;
using cascade::testing::tabular_instance;
using cascade::testing::three_hypothesis_instance;

TEST_CASE("consistency checks", "[core]") {
  const Instance inst = three_hypothesis_instance();
  const Realization phi{{1, 0}};

  PartialRealization agree;
  agree.push(0, 1);
  CHECK(is_consistent(inst, phi, agree));

  PartialRealization disagree;
  disagree.push(0, 0);
  CHECK_FALSE(is_consistent(inst, phi, disagree));

  CHECK(is_consistent(inst, phi, PartialRealization{}));

  PartialRealization bad;
  bad.push(7, 0);
  CHECK_THROWS_AS(is_consistent(inst, phi, bad), InvalidInput);
}

TEST_CASE("subrealization ordering", "[core]") {
  const Instance inst = tabular_instance(
      {0.5, 0.5, 0.5}, {{0.5, {1, 0, 0}}, {0.5, {1, 1, 0}}});
  PartialRealization small;
  small.push(0, 1);
  PartialRealization big;
  big.push(2, 0);
  big.push(0, 1);
  CHECK(is_subrealization(inst, small, big));
  CHECK(is_subrealization(inst, PartialRealization{}, big));

  PartialRealization mismatched;
  mismatched.push(0, 0);
  CHECK_FALSE(is_subrealization(inst, mismatched, big));

  SECTION("reflexive and transitive over enumerated observations") {
    // All sub-realizations of a fixed 3-item observation set.
    PartialRealization full;
    full.push(0, 1);
    full.push(1, 0);
    full.push(2, 0);
    std::vector<PartialRealization> all;
    const auto obs = full.canonical();
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      PartialRealization psi;
      for (std::size_t j = 0; j < 3; ++j)
        if (mask & (1ull << j)) psi.push(obs[j].item, obs[j].state);
      all.push_back(psi);
    }
    for (const auto& a : all) {
      CHECK(is_subrealization(inst, a, a));
      for (const auto& b : all)
        for (const auto& c : all)
          if (is_subrealization(inst, a, b) && is_subrealization(inst, b, c))
            CHECK(is_subrealization(inst, a, c));
    }
  }
}

TEST_CASE("posterior restriction and renormalization", "[core]") {
  SECTION("uniform prior, one hypothesis eliminated") {
    const double third = 1.0 / 3.0;
    const Instance inst = tabular_instance(
        {0.5}, {{third, {0}}, {third, {0}}, {third, {1}}}, 2);
    PartialRealization psi;
    psi.push(0, 0);
    const TabularPrior post = posterior(inst, psi);
    REQUIRE(post.entries.size() == 2);
    CHECK(post.entries[0].weight == Approx(0.5).margin(1e-12));
    CHECK(post.entries[1].weight == Approx(0.5).margin(1e-12));
  }

  SECTION("hand renormalization 0.3/0.5 and 0.2/0.5") {
    const Instance inst = three_hypothesis_instance();
    PartialRealization psi;
    psi.push(0, 1);  // eliminates the 0.5 hypothesis
    const TabularPrior post = posterior(inst, psi);
    REQUIRE(post.entries.size() == 2);
    CHECK(post.entries[0].weight == Approx(0.6).margin(1e-12));
    CHECK(post.entries[1].weight == Approx(0.4).margin(1e-12));
  }

  SECTION("empty observation leaves the prior unchanged") {
    const Instance inst = three_hypothesis_instance();
    const TabularPrior post = posterior(inst, PartialRealization{});
    REQUIRE(post.entries.size() == 3);
    CHECK(post.entries[0].weight == 0.5);
    CHECK(post.entries[1].weight == 0.3);
    CHECK(post.entries[2].weight == 0.2);
  }

  SECTION("zero-probability conditioning is rejected") {
    const Instance inst = tabular_instance({0.5}, {{1.0, {0}}}, 2);
    PartialRealization psi;
    psi.push(0, 1);
    CHECK_THROWS_AS(posterior(inst, psi), ConditioningOnNull);
  }

  SECTION("posterior weights sum to 1 for random observations") {
    SplitMix64 rng(2026);
    const Instance inst = testing::random_vs_instance(4, 6, 0.2, 0.9, 11);
    for (int t = 0; t < 200; ++t) {
      // Project a random hypothesis onto a random item subset.
      const auto& entries = inst.tabular()->entries;
      const auto& phi = entries[rng.next_below(entries.size())].phi;
      PartialRealization psi;
      for (std::size_t j = 0; j < inst.size(); ++j)
        if (rng.next_double() < 0.5)
          psi.push(static_cast<ItemId>(j), phi.at(static_cast<ItemId>(j)));
      const TabularPrior post = posterior(inst, psi);
      double sum = 0.0;
      for (const auto& en : post.entries) sum += en.weight;
      CHECK(sum == Approx(1.0).margin(1e-9));
    }
  }
}

TEST_CASE("probability of an observation", "[core]") {
  const Instance inst = three_hypothesis_instance();
  CHECK(prob_of_observation(inst, PartialRealization{}) == 1.0);

  PartialRealization psi;
  psi.push(0, 0);
  CHECK(prob_of_observation(inst, psi) == Approx(0.5).margin(1e-12));

  // Point 1 has label 1 only under the last hypothesis, which labels point 0
  // with 1; the combination (0,0),(1,1) contradicts every hypothesis.
  PartialRealization impossible;
  impossible.push(0, 0);
  impossible.push(1, 1);
  CHECK(prob_of_observation(inst, impossible) == 0.0);
}

TEST_CASE("product posterior matches its tabular expansion", "[core]") {
  const Instance inst = product_instance(
      {0.9, 0.5, 0.4, 0.7},
      {{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}, {0.1, 0.8, 0.1}, {0.3, 0.3, 0.4}},
      3);
  SplitMix64 rng(7);
  for (int t = 0; t < 100; ++t) {
    PartialRealization psi;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (rng.next_double() < 0.5) continue;
      // Only draw states with positive probability.
      StateId s;
      do {
        s = static_cast<StateId>(rng.next_below(3));
      } while (!(inst.product()->dists[j][static_cast<std::size_t>(s)] > 0.0));
      psi.push(static_cast<ItemId>(j), s);
    }
    // Clamped-product route: observed items pinned, others untouched.
    const TabularPrior post = posterior(inst, psi);
    for (std::size_t j = 0; j < inst.size(); ++j) {
      const ItemId i = static_cast<ItemId>(j);
      const std::vector<double> q = state_posterior(inst, i, psi);
      std::vector<double> expect(3, 0.0);
      if (auto s = psi.state_of(i)) {
        expect[static_cast<std::size_t>(*s)] = 1.0;
      } else {
        expect = inst.product()->dists[j];
      }
      // Marginalize the tabular posterior for item i.
      std::vector<double> marginal(3, 0.0);
      for (const auto& en : post.entries)
        marginal[static_cast<std::size_t>(en.phi.at(i))] += en.weight;
      for (std::size_t s = 0; s < 3; ++s) {
        CHECK(marginal[s] == Approx(expect[s]).margin(1e-9));
        CHECK(q[s] == Approx(expect[s]).margin(1e-9));
      }
    }
  }
}

TEST_CASE("instance validation rejects malformed data", "[core]") {
  Instance inst = three_hypothesis_instance();
  SECTION("sparse ids") {
    inst.items[1].id = 3;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SECTION("delta out of range") {
    inst.items[0].delta = 1.5;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SECTION("weights must be positive") {
    std::get<TabularPrior>(inst.prior).entries[0].weight = 0.0;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SECTION("weights must sum to one") {
    std::get<TabularPrior>(inst.prior).entries[0].weight = 0.75;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SECTION("realizations must cover every item") {
    std::get<TabularPrior>(inst.prior).entries[0].phi.states.pop_back();
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
}

TEST_CASE("partial realization bookkeeping", "[core]") {
  PartialRealization psi;
  psi.push(2, 1);
  psi.push(0, 0);
  CHECK(psi.size() == 2);
  CHECK(psi.contains(2));
  CHECK_FALSE(psi.contains(1));
  CHECK(psi.state_of(0) == StateId{0});
  CHECK_THROWS_AS(psi.push(2, 0), InvalidInput);

  PartialRealization other;
  other.push(0, 0);
  other.push(2, 1);
  CHECK(psi == other);  // unordered equality
  CHECK(psi.canonical_hash() == other.canonical_hash());

  psi.pop_last();
  CHECK_FALSE(psi.contains(0));
}

TEST_CASE("product expansion is guarded", "[core]") {
  std::vector<double> deltas(13, 0.5);
  std::vector<std::vector<double>> dists(13, {0.5, 0.5});
  const Instance inst = product_instance(deltas, dists);
  CHECK_THROWS_AS(inst.tabular_expansion(12), ResourceLimit);
}
