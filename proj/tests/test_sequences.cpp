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

#include <algorithm>
#include <cmath>

#include <catch2/catch.hpp>

#include "cascade/rng.hpp"
#include "cascade/sequences.hpp"

using namespace cascade;

TEST_CASE("reachability is the product over the preceding prefix", "[sequences]") {
  const std::vector<double> deltas = {0.9, 0.8, 0.7};
  const ItemSequence seq = {0, 1, 2};
  CHECK(reachability(seq, 3, deltas) == Approx(0.72).margin(1e-12));
  CHECK(reachability(seq, 1, deltas) == 1.0);

  const std::vector<double> dead = {0.0};
  CHECK(reachability({0}, 1, dead) == 1.0);  // prefix excludes the item itself

  CHECK_THROWS_AS(reachability(seq, 0, deltas), InvalidInput);
  CHECK_THROWS_AS(reachability(seq, 4, deltas), InvalidInput);

  SECTION("nonincreasing in the position") {
    SplitMix64 rng(41);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> d(6);
      for (double& x : d) x = rng.next_double();
      ItemSequence s = {0, 1, 2, 3, 4, 5};
      double prev = 1.0;
      for (std::size_t k = 1; k <= s.size(); ++k) {
        const double r = reachability(s, k, d);
        CHECK(r <= prev + 1e-15);
        prev = r;
      }
    }
  }
}

TEST_CASE("classification of sequences", "[sequences]") {
  const std::vector<double> deltas = {0.9, 0.8, 0.7};
  const double everything = 0.9 * 0.8 * 0.7;  // 0.504

  SECTION("reachable but not strongly, hence maximal") {
    const auto c = classify({0, 1, 2}, 0.7, deltas, everything);
    CHECK(c.rho_reachable);
    CHECK_FALSE(c.strongly);
    CHECK(c.maximal);
    CHECK(c.kind == ReachabilityClass::Kind::MaximalRhoReachable);
  }

  SECTION("empty sequence is strongly reachable") {
    const auto c = classify({}, 1.0, deltas, everything);
    CHECK(c.strongly);
    CHECK(c.kind == ReachabilityClass::Kind::StronglyRhoReachable);
  }

  SECTION("rho zero makes everything strongly reachable") {
    const auto c = classify({0, 1, 2}, 0.0, deltas, everything);
    CHECK(c.strongly);
  }

  SECTION("strong implies reachable, exhaustively") {
    SplitMix64 rng(99);
    std::vector<double> d(5);
    for (double& x : d) x = rng.next_double();
    double all = 1.0;
    for (double x : d) all *= x;
    // All permutations of all sizes over 5 items.
    std::vector<ItemId> ids = {0, 1, 2, 3, 4};
    std::sort(ids.begin(), ids.end());
    do {
      for (std::size_t len = 0; len <= ids.size(); ++len) {
        ItemSequence seq(ids.begin(), ids.begin() + len);
        for (int g = 0; g <= 10; ++g) {
          const auto c = classify(seq, 0.1 * g, d, all);
          if (c.strongly) CHECK(c.rho_reachable);
        }
      }
    } while (std::next_permutation(ids.begin(), ids.end()));
  }
}

TEST_CASE("virtual cost", "[sequences]") {
  CHECK(virtual_cost(1.0) == 0.0);
  CHECK(virtual_cost(1.0 / std::exp(1.0)) == Approx(1.0).margin(1e-12));
  CHECK(virtual_cost(0.5) == Approx(0.6931471805599453).margin(1e-15));
  CHECK(std::isinf(virtual_cost(0.0)));
  CHECK_THROWS_AS(virtual_cost(-0.1), InvalidInput);
  CHECK_THROWS_AS(virtual_cost(1.1), InvalidInput);

  SECTION("additive along sequences") {
    SplitMix64 rng(5);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> d(7);
      double product = 1.0, sum = 0.0;
      for (double& x : d) {
        x = 0.05 + 0.95 * rng.next_double();
        product *= x;
        sum += virtual_cost(x);
      }
      CHECK(sum == Approx(-std::log(product)).margin(1e-9));
    }
  }
}

TEST_CASE("death-event mass identity", "[sequences]") {
  // The death-position weights of a sequence account for exactly the mass
  // that does not survive the whole sequence.
  SplitMix64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 1 + rng.next_below(8);
    std::vector<double> d(m);
    for (double& x : d) x = rng.next_double();
    ItemSequence seq(m);
    for (std::size_t j = 0; j < m; ++j) seq[j] = static_cast<ItemId>(j);
    double sum = 0.0, product = 1.0;
    for (std::size_t k = 1; k <= m; ++k) {
      sum += (1.0 - d[k - 1]) * reachability(seq, k, d);
      product *= d[k - 1];
    }
    REQUIRE(std::abs(sum - (1.0 - product)) < 1e-12);
  }
}

TEST_CASE("mixture constants", "[sequences]") {
  const double e = std::exp(1.0);

  CHECK(alpha(0.0) == 1.0);
  CHECK(alpha(1.0) == Approx(1.0 / (2.0 - 1.0 / e)).margin(1e-15));
  CHECK_THROWS_AS(alpha(-0.01), InvalidInput);

  SECTION("alpha stays within its range") {
    for (int g = 0; g <= 100; ++g) {
      const double a = alpha(0.01 * g);
      CHECK(a <= 1.0);
      CHECK(a > 1.0 / (2.0 - 1.0 / e) - 1e-12);
    }
  }

  SECTION("rho_star matches an independent form of the closed expression") {
    // (sqrt(e(2e-1)) - e)/(e-1) == (sqrt(1 + beta) - 1)/beta for
    // beta = 1 - 1/e.
    const double beta = 1.0 - 1.0 / e;
    const double alt = (std::sqrt(1.0 + beta) - 1.0) / beta;
    CHECK(rho_star() == Approx(alt).margin(1e-12));
    CHECK(rho_star() == Approx(0.4390693113960779).margin(1e-12));
  }

  SECTION("guarantee values") {
    CHECK(guarantee(0.0) == 0.0);
    CHECK(guarantee(1.0) == 0.0);
    CHECK(guarantee(rho_star()) > 0.12);
    CHECK(guarantee(rho_star()) == Approx(0.12186137720784414).margin(1e-12));
  }

  SECTION("grid search lands on rho_star") {
    const double grid_best = best_rho_on_grid(1e-3);
    CHECK(std::abs(grid_best - rho_star()) <= 5e-3);
  }
}
