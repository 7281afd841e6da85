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

#include "coqplan/instance.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "exact_json.hpp"

namespace coqplan {

using detail::Json;

Quantity ProblemInstance::ingredient_demand(std::size_t j, std::size_t first, std::size_t last) const {
  Rational sum = 0;
  for (std::size_t t = first; t <= last; ++t) sum += demands[t];
  return ingredients[j].alpha * sum;
}

std::optional<std::size_t> ProblemInstance::find_ingredient(std::string_view id) const {
  for (std::size_t j = 0; j < ingredients.size(); ++j) {
    if (ingredients[j].id == id) return j;
  }
  return std::nullopt;
}

bool is_supply_shortfall(std::string_view violation) {
  return violation.find("exceeds reachable supply") != std::string_view::npos;
}

ValidationReport validate(const ProblemInstance& instance) {
  ValidationReport report;
  if (instance.ordering_cost < 0) report.push_back("ordering cost must be non-negative");
  if (instance.demands.empty()) report.push_back("instance has no periods");
  if (instance.ingredients.empty()) report.push_back("instance has no ingredients");
  for (std::size_t t = 0; t < instance.demands.size(); ++t) {
    if (instance.demands[t] < 0) {
      report.push_back("demand in period " + std::to_string(t + 1) + " is negative");
    }
  }

  Rational total_demand = 0;
  for (const auto& d : instance.demands) total_demand += d;

  std::set<std::string> ids;
  for (const auto& ing : instance.ingredients) {
    const std::string who = "ingredient " + ing.id + ": ";
    if (ing.id.empty()) report.push_back("ingredient with empty id");
    if (!ids.insert(ing.id).second) report.push_back(who + "duplicate id");
    if (ing.alpha <= 0) report.push_back(who + "blend factor must be positive");
    if (ing.holding_cost < 0) report.push_back(who + "holding cost must be non-negative");
    if (ing.levels.empty()) {
      report.push_back(who + "no discount levels");
      continue;
    }
    if (ing.levels.front().min_qty <= 0) report.push_back(who + "level 1 lower bound must be positive");
    for (std::size_t n = 1; n < ing.levels.size(); ++n) {
      if (ing.levels[n].min_qty <= ing.levels[n - 1].min_qty) {
        report.push_back(who + "lower bounds not strictly increasing at level " + std::to_string(n + 1));
      }
      if (ing.levels[n].unit_price >= ing.levels[n - 1].unit_price) {
        report.push_back(who + "prices not strictly decreasing at level " + std::to_string(n + 1));
      }
    }
    if (ing.levels.back().unit_price < 0) report.push_back(who + "unit prices must be non-negative");
    if (ing.capacity <= ing.levels.back().min_qty) {
      report.push_back(who + "capacity " + format_exact(ing.capacity) +
                       " must exceed the last level lower bound " + format_exact(ing.levels.back().min_qty));
    }
    // At most one order per period, each at most u_j.
    if (ing.alpha > 0 && !instance.demands.empty()) {
      Rational cumulative = ing.alpha * total_demand;
      Rational reachable = ing.capacity * static_cast<long>(instance.demands.size());
      if (cumulative > reachable) {
        report.push_back(who + "cumulative demand " + format_exact(cumulative) + " exceeds reachable supply " +
                         format_exact(reachable));
      }
    }
  }
  return report;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : InstanceError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

std::string join(const ValidationReport& violations) {
  std::string out = "invalid instance";
  for (const auto& v : violations) out += "\n  " + v;
  return out;
}

DiscountLevel parse_level(const Json& node, const std::string& where) {
  detail::reject_unknown_fields(node, {"min_qty", "unit_price"}, where);
  return {detail::json_rational(detail::require_field(node, "min_qty", where), where + ".min_qty"),
          detail::json_rational(detail::require_field(node, "unit_price", where), where + ".unit_price")};
}

IngredientSpec parse_ingredient(const Json& node, const std::string& where) {
  detail::reject_unknown_fields(node, {"id", "alpha", "holding_cost", "capacity", "levels"}, where);
  IngredientSpec ing;
  const Json& id = detail::require_field(node, "id", where);
  if (!detail::is_plain_string(id)) throw SemanticError(where + ".id: expected a string");
  ing.id = id.get<std::string>();
  ing.alpha = detail::json_rational(detail::require_field(node, "alpha", where), where + ".alpha");
  ing.holding_cost =
      detail::json_rational(detail::require_field(node, "holding_cost", where), where + ".holding_cost");
  ing.capacity = detail::json_rational(detail::require_field(node, "capacity", where), where + ".capacity");
  const Json& levels = detail::require_field(node, "levels", where);
  if (!levels.is_array()) throw SemanticError(where + ".levels: expected an array");
  for (std::size_t n = 0; n < levels.size(); ++n) {
    ing.levels.push_back(parse_level(levels[n], where + ".levels[" + std::to_string(n) + "]"));
  }
  return ing;
}

}  // namespace

ValidationError::ValidationError(ValidationReport violations)
    : InstanceError(join(violations)), violations_(std::move(violations)) {}

ProblemInstance parse_instance(std::string_view text) {
  Json root = detail::parse_exact_json(text);
  const std::string where = "instance";
  detail::reject_unknown_fields(root, {"ordering_cost", "demands", "ingredients"}, where);

  ProblemInstance instance;
  instance.ordering_cost =
      detail::json_rational(detail::require_field(root, "ordering_cost", where), "ordering_cost");

  const Json& demands = detail::require_field(root, "demands", where);
  if (!demands.is_array()) throw SemanticError("demands: expected an array");
  for (std::size_t t = 0; t < demands.size(); ++t) {
    Rational d = detail::json_rational(demands[t], "demands[" + std::to_string(t) + "]");
    if (d < 0) {
      throw SemanticError("demand in period " + std::to_string(t + 1) + " is negative (" + format_exact(d) + ")");
    }
    instance.demands.push_back(d);
  }

  const Json& ingredients = detail::require_field(root, "ingredients", where);
  if (!ingredients.is_array()) throw SemanticError("ingredients: expected an array");
  for (std::size_t j = 0; j < ingredients.size(); ++j) {
    instance.ingredients.push_back(parse_ingredient(ingredients[j], "ingredients[" + std::to_string(j) + "]"));
  }

  if (auto violations = validate(instance); !violations.empty()) throw ValidationError(std::move(violations));
  return instance;
}

ProblemInstance parse_instance(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_instance(std::string_view(text));
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_instance(in);
}

std::string serialize_instance(const ProblemInstance& instance) {
  std::string out = "{\n  \"ordering_cost\": ";
  detail::append_rational(out, instance.ordering_cost);
  out += ",\n  \"demands\": [";
  for (std::size_t t = 0; t < instance.demands.size(); ++t) {
    if (t) out += ", ";
    detail::append_rational(out, instance.demands[t]);
  }
  out += "],\n  \"ingredients\": [";
  for (std::size_t j = 0; j < instance.ingredients.size(); ++j) {
    const auto& ing = instance.ingredients[j];
    out += j ? ",\n    {\n" : "\n    {\n";
    out += "      \"id\": ";
    detail::append_string(out, ing.id);
    out += ",\n      \"alpha\": ";
    detail::append_rational(out, ing.alpha);
    out += ",\n      \"holding_cost\": ";
    detail::append_rational(out, ing.holding_cost);
    out += ",\n      \"capacity\": ";
    detail::append_rational(out, ing.capacity);
    out += ",\n      \"levels\": [";
    for (std::size_t n = 0; n < ing.levels.size(); ++n) {
      out += n ? ",\n        " : "\n        ";
      out += "{\"min_qty\": ";
      detail::append_rational(out, ing.levels[n].min_qty);
      out += ", \"unit_price\": ";
      detail::append_rational(out, ing.levels[n].unit_price);
      out += "}";
    }
    out += ing.levels.empty() ? "]\n    }" : "\n      ]\n    }";
  }
  out += instance.ingredients.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

ProblemInstance base_instance() {
  auto level = [](long q, long p) { return DiscountLevel{Quantity(q), Money(p)}; };
  ProblemInstance instance;
  instance.ordering_cost = 500;
  for (long d : {160, 168, 207, 230, 190, 236}) instance.demands.emplace_back(d);
  instance.ingredients.push_back({"j1", 3, 1, 5000, {level(1, 15), level(1200, 14), level(2500, 13)}});
  instance.ingredients.push_back({"j2", 5, 1, 10000, {level(1, 12), level(1700, 10), level(4000, 8)}});
  return instance;
}

}  // namespace coqplan
