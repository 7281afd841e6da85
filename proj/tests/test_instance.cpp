// Copyright 2026 The coqplan Authors
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

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "coqplan/instance.hpp"
#include "test_support.hpp"

using namespace coqplan;
using coqplan::testing::data_path;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTiny = R"({"ordering_cost": 1, "demands": [10],
  "ingredients": [{"id": "a", "alpha": 1, "holding_cost": 0, "capacity": 5,
                   "levels": [{"min_qty": 1, "unit_price": 2}]}]})";

}  // namespace

TEST_CASE("base instance file matches the built-in instance") {
  const ProblemInstance inst = load_instance(data_path("data/base.json"));
  CHECK(inst == base_instance());
  CHECK(inst.num_ingredients() == 2);
  CHECK(inst.periods() == 6);
  CHECK(inst.ordering_cost == 500);
  CHECK(validate(inst).empty());
}

TEST_CASE("serialization is canonical and round-trips") {
  const std::string text = serialize_instance(base_instance());
  CHECK(text == slurp(data_path("tests/fixtures/base_canonical.json")));
  CHECK(parse_instance(text) == base_instance());
}

TEST_CASE("field order is irrelevant and decimals are exact") {
  const ProblemInstance inst = parse_instance(R"({
    "ingredients": [{"levels": [{"unit_price": 0.1, "min_qty": 1}], "capacity": "7/2",
                     "holding_cost": 0.3, "alpha": 1.5, "id": "x"}],
    "demands": [0.2, 1],
    "ordering_cost": 1e1
  })");
  CHECK(inst.ordering_cost == 10);
  CHECK(inst.demands[0] == make_rational(1, 5));
  CHECK(inst.ingredients[0].alpha == make_rational(3, 2));
  CHECK(inst.ingredients[0].holding_cost == make_rational(3, 10));
  CHECK(inst.ingredients[0].capacity == make_rational(7, 2));
  CHECK(inst.ingredients[0].levels[0].unit_price == make_rational(1, 10));
  CHECK(inst.ingredient_demand(0, 0) == make_rational(3, 10));
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_instance("{\n  \"ordering_cost\": 5,\n  \"demands\": [1, 2,,]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 20);
  }
}

TEST_CASE("semantic errors") {
  CHECK_THROWS_AS(parse_instance(R"({"ordering_cost": 1, "demands": [1]})"), SemanticError);
  CHECK_THROWS_AS(parse_instance(R"({"ordering_cost": 1, "demands": [1], "ingredients": [], "extra": 0})"),
                  SemanticError);
  CHECK_THROWS_AS(parse_instance(R"({"ordering_cost": 1, "ordering_cost": 2, "demands": [1], "ingredients": []})"),
                  SemanticError);
  CHECK_THROWS_AS(parse_instance(R"({"ordering_cost": "cheap", "demands": [1], "ingredients": []})"), SemanticError);
  try {
    parse_instance(R"({"ordering_cost": 1, "demands": [3, -1], "ingredients": []})");
    FAIL("expected a semantic error");
  } catch (const SemanticError& e) {
    CHECK(std::string(e.what()).find("demand in period 2 is negative") != std::string::npos);
  }
}

TEST_CASE("validation reports each broken invariant") {
  ProblemInstance inst = base_instance();
  inst.ingredients[0].levels[1].unit_price = 15;
  auto report = validate(inst);
  REQUIRE(report.size() == 1);
  CHECK(report[0] == "ingredient j1: prices not strictly decreasing at level 2");

  inst = base_instance();
  inst.ingredients[1].capacity = 4000;
  inst.ingredients[1].alpha = 0;
  inst.ingredients[0].holding_cost = -1;
  inst.ordering_cost = -3;
  report = validate(inst);
  CHECK(report.size() == 4);

  inst = base_instance();
  inst.ingredients[0].levels[2].min_qty = 1200;
  report = validate(inst);
  REQUIRE(report.size() == 1);
  CHECK(report[0] == "ingredient j1: lower bounds not strictly increasing at level 3");

  inst = base_instance();
  inst.ingredients[1].id = "j1";
  report = validate(inst);
  REQUIRE(report.size() == 1);
  CHECK(report[0] == "ingredient j1: duplicate id");
}

TEST_CASE("unreachable cumulative demand is a validation error") {
  try {
    parse_instance(kTiny);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].find("cumulative demand 10 exceeds reachable supply 5") != std::string::npos);
    CHECK(is_supply_shortfall(e.violations()[0]));
  }
  CHECK_FALSE(is_supply_shortfall("ingredient a: duplicate id"));
}

TEST_CASE("helpers") {
  const ProblemInstance inst = base_instance();
  CHECK(inst.ingredient_demand(0, 2, 5) == 2589);
  CHECK(inst.ingredient_demand(1, 0) == 800);
  CHECK(inst.find_ingredient("j2") == std::optional<std::size_t>(1));
  CHECK_FALSE(inst.find_ingredient("j9"));
  CHECK(inst.ingredients[0].min_order() == 1);
  CHECK(inst.ingredients[1].cheapest_price() == 8);
  CHECK_THROWS(load_instance(data_path("data/does-not-exist.json")));
}
