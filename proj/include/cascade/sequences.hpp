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
// Reachability arithmetic over item sequences, virtual costs, and the
// closed-form constants of the greedy-plus mixture.
//
// The reachability of the k-th position of a sequence is the probability the
// selection process is still live when that position comes up: the product of
// the continuation probabilities of the preceding items. Virtual cost
// c(i) = -log delta_i turns the multiplicative "whole set stays reachable"
// constraint into an additive budget -log rho.
//

#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cascade/core.hpp"

namespace cascade {

// Ordered list of distinct item ids.
using ItemSequence = std::vector<ItemId>;

inline void require_valid_sequence(const ItemSequence& seq,
                                   std::size_t item_count) {
  for (std::size_t a = 0; a < seq.size(); ++a) {
    if (seq[a] < 0 || static_cast<std::size_t>(seq[a]) >= item_count)
      throw InvalidInput("sequence references unknown item id " +
                         std::to_string(seq[a]));
    for (std::size_t b = a + 1; b < seq.size(); ++b)
      if (seq[a] == seq[b])
        throw InvalidInput("sequence repeats item id " +
                           std::to_string(seq[a]));
  }
}

// Probability that the k-th position (1-based) of seq is reached: the product
// of deltas over the first k-1 items. The first position is always reached.
inline double reachability(const ItemSequence& seq, std::size_t k,
                           std::span<const double> deltas) {
  if (k < 1 || k > seq.size())
    throw InvalidInput("position " + std::to_string(k) +
                       " out of range for sequence of length " +
                       std::to_string(seq.size()));
  double p = 1.0;
  for (std::size_t j = 0; j + 1 < k; ++j)
    p *= deltas[static_cast<std::size_t>(seq[j])];
  return p;
}

struct ReachabilityClass {
  enum class Kind { None, RhoReachable, MaximalRhoReachable, StronglyRhoReachable };

  Kind kind = Kind::None;  // strongest applicable label
  double rho = 0.0;
  // Individual predicates; StronglyRhoReachable implies RhoReachable.
  bool rho_reachable = false;
  bool strongly = false;
  bool maximal = false;
};

// Classifies seq at threshold rho. `all_items_product` is the delta product
// over the whole ground set; when it is >= rho every sequence counts as
// maximal.
inline ReachabilityClass classify(const ItemSequence& seq, double rho,
                                  std::span<const double> deltas,
                                  double all_items_product) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw InvalidInput("rho must lie in [0,1]");
  ReachabilityClass out;
  out.rho = rho;
  double last_reach = 1.0;  // empty prefix
  double full = 1.0;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    if (j + 1 < seq.size())
      last_reach *= deltas[static_cast<std::size_t>(seq[j])];
    full *= deltas[static_cast<std::size_t>(seq[j])];
  }
  out.rho_reachable = last_reach >= rho;
  out.strongly = full >= rho;
  if (out.strongly) out.rho_reachable = true;
  out.maximal =
      all_items_product >= rho || (out.rho_reachable && !out.strongly);
  using K = ReachabilityClass::Kind;
  if (out.strongly)
    out.kind = K::StronglyRhoReachable;
  else if (out.maximal)
    out.kind = K::MaximalRhoReachable;
  else if (out.rho_reachable)
    out.kind = K::RhoReachable;
  else
    out.kind = K::None;
  return out;
}

inline ReachabilityClass classify(const ItemSequence& seq, double rho,
                                  const Instance& inst) {
  return classify(seq, rho, inst.deltas(), inst.delta_product());
}

// Virtual cost c(i) = -log delta_i (natural log). delta = 0 maps to +inf;
// such items are legal last items of a sequence.
inline double virtual_cost(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw InvalidInput("delta must lie in [0,1]");
  if (delta == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(delta);
}

// Mixture weight of the ratio-greedy candidate: 1 / (rho (1 - 1/e) + 1).
inline double alpha(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw InvalidInput("rho must lie in [0,1]");
  return 1.0 / (rho * (1.0 - 1.0 / std::exp(1.0)) + 1.0);
}

// Approximation guarantee of the mixture at threshold rho.
inline double guarantee(double rho) {
  return (1.0 - rho) * rho * (1.0 - 1.0 / std::exp(1.0)) * alpha(rho);
}

// The rho maximizing guarantee(): (sqrt(e(2e-1)) - e) / (e - 1), about
// 0.4390693; guarantee(rho_star()) is about 0.1218614, above 0.12.
inline double rho_star() {
  const double e = std::exp(1.0);
  return (std::sqrt(e * (2.0 * e - 1.0)) - e) / (e - 1.0);
}

// Diagnostic grid search over {0, step, 2 step, ..., 1}; returns the argmax.
inline double best_rho_on_grid(double step = 1e-3) {
  if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("step must be in (0,1]");
  double best_rho = 0.0, best_g = guarantee(0.0);
  for (double r = step; r <= 1.0 + step / 2; r += step) {
    const double rr = std::min(r, 1.0);
    const double g = guarantee(rr);
    if (g > best_g) {
      best_g = g;
      best_rho = rr;
    }
  }
  return best_rho;
}

}  // namespace cascade
