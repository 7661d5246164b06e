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

#include <sstream>
#include <string>

#include <catch2/catch.hpp>

#include "cascade/format.hpp"
#include "cascade/instance_io.hpp"

using namespace cascade;

namespace {

LoadedInstance parse(const std::string& text) {
  std::istringstream in(text);
  return load_instance(in, "test");
}

std::string parse_error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  FAIL("expected a parse error");
  return "";
}

}  // namespace

TEST_CASE("fixture files load", "[io]") {
  for (const char* name : {"two-coin.json", "vs-basic.json", "vs-micro4.json",
                           "additive-corr.json", "edge-deltas.json"}) {
    const LoadedInstance loaded =
        load_instance_file(std::string(CASCADE_FIXTURE_DIR) + "/" + name);
    CHECK(loaded.instance.size() >= 2);
    CHECK_NOTHROW(loaded.make_utility());
  }
}

TEST_CASE("loader reports the first violation with its path", "[io]") {
  SECTION("missing field") {
    const std::string msg = parse_error_of(R"({"items": []})");
    CHECK(msg.find("states") != std::string::npos);
  }
  SECTION("sparse item ids") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 1, "delta": 0.5}],
      "prior": {"type": "tabular", "entries": [{"p": 1.0, "phi": [0]}]}
    })");
    CHECK(msg.find("items[0].id") != std::string::npos);
  }
  SECTION("delta out of range") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 0, "delta": 1.5}],
      "prior": {"type": "tabular", "entries": [{"p": 1.0, "phi": [0]}]}
    })");
    CHECK(msg.find("items[0].delta") != std::string::npos);
  }
  SECTION("zero weight") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 0, "delta": 0.5}],
      "prior": {"type": "tabular", "entries": [{"p": 0.0, "phi": [0]}]}
    })");
    CHECK(msg.find("entries[0].p") != std::string::npos);
  }
  SECTION("weights off by more than the tolerance") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 0, "delta": 0.5}],
      "prior": {"type": "tabular", "entries": [{"p": 0.9, "phi": [0]}]}
    })");
    CHECK(msg.find("sum") != std::string::npos);
  }
  SECTION("state out of range") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 0, "delta": 0.5}],
      "prior": {"type": "tabular", "entries": [{"p": 1.0, "phi": [2]}]}
    })");
    CHECK(msg.find("phi[0]") != std::string::npos);
  }
  SECTION("short phi") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 0, "delta": 0.5}, {"id": 1, "delta": 0.5}],
      "prior": {"type": "tabular", "entries": [{"p": 1.0, "phi": [0]}]}
    })");
    CHECK(msg.find("phi") != std::string::npos);
  }
  SECTION("version-space needs a tabular prior") {
    const std::string msg = parse_error_of(R"({
      "states": 2,
      "items": [{"id": 0, "delta": 0.5}],
      "prior": {"type": "product", "dists": [[0.5, 0.5]]},
      "utility": {"type": "version-space"}
    })");
    CHECK(msg.find("utility") != std::string::npos);
  }
  SECTION("invalid JSON") {
    CHECK_THROWS_AS(parse("{"), ParseError);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(load_instance_file("/nonexistent/xyz.json"), ParseError);
  }
}

TEST_CASE("round trip preserves the instance", "[io]") {
  const LoadedInstance loaded =
      load_instance_file(std::string(CASCADE_FIXTURE_DIR) + "/vs-micro4.json");
  std::ostringstream out;
  save_instance(out, loaded.instance, loaded.utility);
  const LoadedInstance again = parse(out.str());
  REQUIRE(again.instance.size() == loaded.instance.size());
  for (std::size_t j = 0; j < loaded.instance.size(); ++j) {
    CHECK(again.instance.items[j].delta == loaded.instance.items[j].delta);
    CHECK(again.instance.items[j].group == loaded.instance.items[j].group);
  }
  const auto& a = loaded.instance.tabular()->entries;
  const auto& b = again.instance.tabular()->entries;
  REQUIRE(a.size() == b.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    CHECK(a[e].weight == b[e].weight);
    CHECK(a[e].phi == b[e].phi);
  }
}

TEST_CASE("doubles round trip through text", "[io]") {
  for (double v : {0.0, 0.5, 1.0 / 3.0, 0.4390693113960779, 1e-17, 12345.678}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(csv_row({"a", "b", "c"}) == "a,b,c\n");
}
