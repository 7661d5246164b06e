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
// Instance JSON schema:
//
//   { "states": k,
//     "items": [{"id": 0, "delta": 0.7, "group": 1}, ...],
//     "prior": {"type": "tabular",
//               "entries": [{"p": 0.5, "phi": [0, 1, ...]}, ...]}
//           or {"type": "product", "dists": [[0.5, 0.5], ...]},
//     "utility": {"type": "version-space"}
//            or {"type": "additive", "weights": [[...], ...]} }
//
// "phi" arrays are indexed by item id. The loader validates every structural
// invariant and reports the first violation with its JSON path. A "comment"
// key is ignored at the top level. When "utility" is omitted, a tabular prior
// defaults to the version-space utility.
//

#pragma once

#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cascade/core.hpp"
#include "cascade/format.hpp"
#include "cascade/utility.hpp"

namespace cascade {

struct UtilitySpec {
  std::string type;  // "version-space" | "additive" | "" (defaulted)
  std::vector<std::vector<double>> weights;
};

struct LoadedInstance {
  Instance instance;
  UtilitySpec utility;

  // Materializes the utility model bound to this->instance.
  std::unique_ptr<UtilityModel> make_utility() const {
    if (utility.type == "additive")
      return std::make_unique<AdditiveStateUtility>(instance, utility.weights);
    if (utility.type == "version-space" ||
        (utility.type.empty() && instance.tabular()))
      return std::make_unique<VersionSpaceUtility>(instance);
    throw InvalidInput(
        "no utility specified and the prior is not tabular; add a "
        "\"utility\" section");
  }
};

namespace detail {

inline ParseError parse_error(const std::string& path, const std::string& msg) {
  return ParseError(path + ": " + msg);
}

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const std::string& path,
                                           const char* key) {
  const auto it = j.find(key);
  if (it == j.end())
    throw parse_error(path, std::string("missing required field \"") + key +
                                "\"");
  return *it;
}

inline double require_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw parse_error(path, "expected a number");
  return j.get<double>();
}

inline std::int64_t require_integer(const nlohmann::json& j,
                                    const std::string& path) {
  if (!j.is_number_integer()) throw parse_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

}  // namespace detail

inline LoadedInstance load_instance(std::istream& in,
                                    const std::string& origin = "<stream>") {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": invalid JSON: " + e.what());
  }
  using detail::parse_error;
  using detail::require_field;
  using detail::require_integer;
  using detail::require_number;

  if (!j.is_object()) throw parse_error(origin, "expected a JSON object");

  LoadedInstance out;
  Instance& inst = out.instance;

  const std::int64_t states =
      require_integer(require_field(j, origin, "states"), origin + ".states");
  if (states < 1 || states > 255)
    throw parse_error(origin + ".states", "state alphabet must be in [1,255]");
  inst.state_alphabet = static_cast<StateId>(states);

  const nlohmann::json& items = require_field(j, origin, "items");
  if (!items.is_array() || items.empty())
    throw parse_error(origin + ".items", "expected a non-empty array");
  for (std::size_t k = 0; k < items.size(); ++k) {
    const std::string path = origin + ".items[" + std::to_string(k) + "]";
    const nlohmann::json& it = items[k];
    if (!it.is_object()) throw parse_error(path, "expected an object");
    Item item;
    item.id = static_cast<ItemId>(
        require_integer(require_field(it, path, "id"), path + ".id"));
    if (static_cast<std::size_t>(item.id) != k)
      throw parse_error(path + ".id",
                        "item ids must be dense from 0 in array order");
    item.delta =
        require_number(require_field(it, path, "delta"), path + ".delta");
    if (!(item.delta >= 0.0 && item.delta <= 1.0))
      throw parse_error(path + ".delta", "delta must lie in [0,1]");
    if (const auto g = it.find("group"); g != it.end()) {
      const std::int64_t group = require_integer(*g, path + ".group");
      if (group < 1 || group > 1024)
        throw parse_error(path + ".group", "group tag must be in [1,1024]");
      item.group = static_cast<int>(group);
    }
    inst.items.push_back(item);
  }

  const nlohmann::json& prior = require_field(j, origin, "prior");
  const std::string prior_path = origin + ".prior";
  if (!prior.is_object()) throw parse_error(prior_path, "expected an object");
  const nlohmann::json& type =
      require_field(prior, prior_path, "type");
  if (type == "tabular") {
    TabularPrior tab;
    const nlohmann::json& entries =
        require_field(prior, prior_path, "entries");
    if (!entries.is_array() || entries.empty())
      throw parse_error(prior_path + ".entries", "expected a non-empty array");
    double sum = 0.0;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const std::string path =
          prior_path + ".entries[" + std::to_string(e) + "]";
      TabularEntry entry;
      entry.weight =
          require_number(require_field(entries[e], path, "p"), path + ".p");
      if (!(entry.weight > 0.0))
        throw parse_error(path + ".p", "weight must be > 0");
      sum += entry.weight;
      const nlohmann::json& phi = require_field(entries[e], path, "phi");
      if (!phi.is_array() || phi.size() != inst.items.size())
        throw parse_error(path + ".phi",
                          "expected one state per item (array of length " +
                              std::to_string(inst.items.size()) + ")");
      for (std::size_t s = 0; s < phi.size(); ++s) {
        const std::int64_t state = require_integer(
            phi[s], path + ".phi[" + std::to_string(s) + "]");
        if (state < 0 || state >= states)
          throw parse_error(path + ".phi[" + std::to_string(s) + "]",
                            "state id out of range");
        entry.phi.states.push_back(static_cast<StateId>(state));
      }
      tab.entries.push_back(std::move(entry));
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw parse_error(prior_path + ".entries",
                        "weights sum to " + format_double(sum) +
                            ", expected 1 within 1e-9");
    inst.prior = std::move(tab);
  } else if (type == "product") {
    ProductPrior prod;
    const nlohmann::json& dists = require_field(prior, prior_path, "dists");
    if (!dists.is_array() || dists.size() != inst.items.size())
      throw parse_error(prior_path + ".dists",
                        "expected one distribution per item");
    for (std::size_t k = 0; k < dists.size(); ++k) {
      const std::string path =
          prior_path + ".dists[" + std::to_string(k) + "]";
      if (!dists[k].is_array() ||
          dists[k].size() != static_cast<std::size_t>(states))
        throw parse_error(path, "expected an array of length " +
                                    std::to_string(states));
      std::vector<double> row;
      double sum = 0.0;
      for (std::size_t s = 0; s < dists[k].size(); ++s) {
        const double q =
            require_number(dists[k][s], path + "[" + std::to_string(s) + "]");
        if (q < 0.0)
          throw parse_error(path + "[" + std::to_string(s) + "]",
                            "probability must be >= 0");
        sum += q;
        row.push_back(q);
      }
      if (std::abs(sum - 1.0) > kProbTolerance)
        throw parse_error(path, "probabilities sum to " + format_double(sum) +
                                    ", expected 1 within 1e-9");
      prod.dists.push_back(std::move(row));
    }
    inst.prior = std::move(prod);
  } else {
    throw parse_error(prior_path + ".type",
                      "expected \"tabular\" or \"product\"");
  }

  if (const auto u = j.find("utility"); u != j.end()) {
    const std::string upath = origin + ".utility";
    if (!u->is_object()) throw parse_error(upath, "expected an object");
    const nlohmann::json& utype = require_field(*u, upath, "type");
    if (utype == "version-space") {
      out.utility.type = "version-space";
      if (!inst.tabular())
        throw parse_error(upath,
                          "version-space utility requires a tabular prior");
    } else if (utype == "additive") {
      out.utility.type = "additive";
      const nlohmann::json& weights = require_field(*u, upath, "weights");
      if (!weights.is_array() || weights.size() != inst.items.size())
        throw parse_error(upath + ".weights",
                          "expected one weight row per item");
      for (std::size_t k = 0; k < weights.size(); ++k) {
        const std::string path =
            upath + ".weights[" + std::to_string(k) + "]";
        if (!weights[k].is_array() ||
            weights[k].size() != static_cast<std::size_t>(states))
          throw parse_error(path, "expected an array of length " +
                                      std::to_string(states));
        std::vector<double> row;
        for (std::size_t s = 0; s < weights[k].size(); ++s) {
          const double w = require_number(
              weights[k][s], path + "[" + std::to_string(s) + "]");
          if (w < 0.0)
            throw parse_error(path + "[" + std::to_string(s) + "]",
                              "weight must be >= 0");
          row.push_back(w);
        }
        out.utility.weights.push_back(std::move(row));
      }
    } else {
      throw parse_error(upath + ".type",
                        "expected \"version-space\" or \"additive\"");
    }
  }

  inst.validate();
  return out;
}

inline LoadedInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return load_instance(in, path);
}

inline nlohmann::json instance_to_json(const Instance& inst,
                                       const UtilitySpec& utility = {}) {
  nlohmann::json j;
  j["states"] = inst.state_alphabet;
  j["items"] = nlohmann::json::array();
  for (const auto& it : inst.items)
    j["items"].push_back(
        {{"id", it.id}, {"delta", it.delta}, {"group", it.group}});
  if (const TabularPrior* t = inst.tabular()) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& en : t->entries)
      entries.push_back({{"p", en.weight}, {"phi", en.phi.states}});
    j["prior"] = {{"type", "tabular"}, {"entries", std::move(entries)}};
  } else {
    j["prior"] = {{"type", "product"}, {"dists", inst.product()->dists}};
  }
  if (utility.type == "additive")
    j["utility"] = {{"type", "additive"}, {"weights", utility.weights}};
  else if (!utility.type.empty())
    j["utility"] = {{"type", utility.type}};
  return j;
}

inline void save_instance(std::ostream& out, const Instance& inst,
                          const UtilitySpec& utility = {}) {
  out << instance_to_json(inst, utility).dump(2) << '\n';
}

}  // namespace cascade
