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

#include <cmath>
#include <sstream>

#include <catch2/catch.hpp>

#include "cascade/experiments.hpp"
#include "cascade/instance_io.hpp"

using namespace cascade;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig config;
  config.hypotheses = 40;
  config.groups = {{8, 2}};
  config.rounds = 60;
  config.seed = 99;
  config.rho = 0.0;  // pure ratio greedy, cheap and strong
  return config;
}

}  // namespace

TEST_CASE("instance generation", "[experiments]") {
  ExperimentConfig config;
  config.hypotheses = 30;
  config.groups = {{40, 2}, {5, 3}, {5, 4}};
  config.delta_low = 0.5;
  config.delta_high = 1.0;
  config.seed = 7;
  const Instance inst = generate_instance(config);

  SECTION("layout") {
    REQUIRE(inst.size() == 50);
    CHECK(inst.state_alphabet == 4);
    CHECK(inst.items[0].group == 1);
    CHECK(inst.items[39].group == 1);
    CHECK(inst.items[40].group == 2);
    CHECK(inst.items[45].group == 3);
    CHECK(inst.group_count() == 3);
  }

  SECTION("weights are positive and sum to one") {
    const auto& entries = inst.tabular()->entries;
    REQUIRE(entries.size() == 30);
    double sum = 0.0;
    for (const auto& en : entries) {
      CHECK(en.weight > 0.0);
      sum += en.weight;
    }
    CHECK(sum == Approx(1.0).margin(1e-9));
  }

  SECTION("labels respect per-group label sets") {
    for (const auto& en : inst.tabular()->entries) {
      for (std::size_t p = 0; p < 40; ++p) CHECK(en.phi.states[p] < 2);
      for (std::size_t p = 40; p < 45; ++p) CHECK(en.phi.states[p] < 3);
      for (std::size_t p = 45; p < 50; ++p) CHECK(en.phi.states[p] < 4);
    }
  }

  SECTION("continuation probabilities respect the sampling range") {
    for (const auto& it : inst.items) {
      CHECK(it.delta >= 0.5);
      CHECK(it.delta < 1.0);
    }
  }

  SECTION("same seed, same instance") {
    const Instance again = generate_instance(config);
    CHECK(again.items.size() == inst.items.size());
    for (std::size_t j = 0; j < inst.size(); ++j)
      CHECK(again.items[j].delta == inst.items[j].delta);
    for (std::size_t e = 0; e < 30; ++e) {
      CHECK(again.tabular()->entries[e].weight ==
            inst.tabular()->entries[e].weight);
      CHECK(again.tabular()->entries[e].phi == inst.tabular()->entries[e].phi);
    }
    config.seed = 8;
    const Instance different = generate_instance(config);
    CHECK(different.items[0].delta != inst.items[0].delta);
  }

  SECTION("generated instances load back through the JSON round trip") {
    std::ostringstream text;
    save_instance(text, inst, {"version-space", {}});
    std::istringstream in(text.str());
    const LoadedInstance back = load_instance(in);
    CHECK(back.instance.size() == inst.size());
    CHECK(back.instance.tabular()->entries.size() == 30);
    CHECK(back.utility.type == "version-space");
  }
}

TEST_CASE("label sweep", "[experiments]") {
  const ExperimentConfig config = tiny_config();
  const std::vector<FigureRow> rows = run_label_sweep(config, {2, 4});

  REQUIRE(rows.size() == 4);  // 2 sizes x {greedy-plus, random}
  CHECK(rows[0].sweep == "labels");
  CHECK(rows[0].policy == "greedy-plus");
  CHECK(rows[1].policy == "random");

  SECTION("percentages stay in range") {
    for (const auto& r : rows) {
      CHECK(r.mean_reduction_pct >= 0.0);
      CHECK(r.mean_reduction_pct <= 100.0);
      for (double g : r.group_pct) {
        CHECK(g >= 0.0);
        CHECK(g <= 100.0);
      }
    }
  }

  SECTION("the informed policy beats the random baseline") {
    CHECK(rows[0].mean_reduction_pct > rows[1].mean_reduction_pct);
    CHECK(rows[2].mean_reduction_pct > rows[3].mean_reduction_pct);
  }

  SECTION("byte-identical CSV across thread counts") {
    ExperimentConfig serial = config;
    serial.threads = 1;
    ExperimentConfig parallel = config;
    parallel.threads = 4;
    const std::string a = figure_csv(run_label_sweep(serial, {2, 4}));
    const std::string b = figure_csv(run_label_sweep(parallel, {2, 4}));
    CHECK(a == b);
    CHECK(a == figure_csv(rows));
  }
}

TEST_CASE("delta sweep and group composition", "[experiments]") {
  ExperimentConfig config = tiny_config();
  config.groups = {{6, 2}, {2, 3}, {2, 4}};
  const std::vector<double> ends = {0.0, 0.6};
  const std::vector<FigureRow> rows = run_delta_sweep(config, ends);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].sweep == "delta_low");
  CHECK(rows[0].sweep_value == 0.0);
  CHECK(rows[2].sweep_value == 0.6);
  for (const auto& r : rows) REQUIRE(r.group_pct.size() == 3);

  SECTION("group composition restricts to the mixture policy") {
    const std::vector<FigureRow> comp = run_group_composition(config, ends);
    REQUIRE(comp.size() == 2);
    for (const auto& r : comp) CHECK(r.policy == "greedy-plus");
  }

  SECTION("invalid lower ends are rejected") {
    CHECK_THROWS_AS(run_delta_sweep(config, {1.0}), InvalidInput);
  }
}

TEST_CASE("experiment configuration validation", "[experiments]") {
  ExperimentConfig config = tiny_config();
  SECTION("hypothesis floor") {
    config.hypotheses = 1;
    CHECK_THROWS_AS(generate_instance(config), InvalidInput);
  }
  SECTION("delta range") {
    config.delta_low = 0.9;
    config.delta_high = 0.5;
    CHECK_THROWS_AS(generate_instance(config), InvalidInput);
  }
  SECTION("at least one point") {
    config.groups = {{0, 2}};
    CHECK_THROWS_AS(generate_instance(config), InvalidInput);
  }
}

TEST_CASE("figure csv shape", "[experiments]") {
  CHECK(figure_csv_header() ==
        "sweep,sweep_value,policy,mean_reduction_pct,stderr,"
        "mean_solution_size,group1_pct,group2_pct,group3_pct\n");
  FigureRow row;
  row.sweep = "labels";
  row.sweep_value = 2;
  row.policy = "random";
  row.mean_reduction_pct = 65.5;
  row.std_error = 0.25;
  row.mean_solution_size = 2.5;
  row.group_pct = {10.0};
  CHECK(figure_csv_row(row) == "labels,2,random,65.5,0.25,2.5,10,0,0\n");
}
