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

// Problem data for multi-item, multi-period procurement under all-unit
// quantity discounts with fixed blending ratios.
//
// Periods and ingredients are addressed by zero-based index throughout the
// library; user-facing text (CLI tables, messages) prints periods 1-based.

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coqplan/rational.hpp"

namespace coqplan {

struct DiscountLevel {
  Quantity min_qty;   // lower bound of the quantity range
  Money unit_price;   // price applied to every unit once min_qty is reached

  bool operator==(const DiscountLevel&) const = default;
};

struct IngredientSpec {
  std::string id;
  Rational alpha;        // units consumed per finished unit
  Money holding_cost;    // per unit per period
  Quantity capacity;     // supplier capacity; top level is closed at it
  std::vector<DiscountLevel> levels;

  bool operator==(const IngredientSpec&) const = default;

  const Quantity& min_order() const { return levels.front().min_qty; }
  const Money& cheapest_price() const { return levels.back().unit_price; }
};

// Initial inventory is zero for every ingredient.
struct ProblemInstance {
  Money ordering_cost;
  std::vector<Rational> demands;  // finished-product demand per period
  std::vector<IngredientSpec> ingredients;

  bool operator==(const ProblemInstance&) const = default;

  std::size_t periods() const { return demands.size(); }
  std::size_t num_ingredients() const { return ingredients.size(); }

  // alpha_j * d_t
  Quantity ingredient_demand(std::size_t j, std::size_t t) const {
    return ingredients[j].alpha * demands[t];
  }
  // alpha_j * (d_first + ... + d_last), inclusive range
  Quantity ingredient_demand(std::size_t j, std::size_t first, std::size_t last) const;

  std::optional<std::size_t> find_ingredient(std::string_view id) const;
};

using ValidationReport = std::vector<std::string>;

// Empty report means the instance is valid. Violations are data, not errors.
ValidationReport validate(const ProblemInstance& instance);

// True for the violation emitted when an ingredient's total demand exceeds
// u_j * |T|. Such an instance is well formed but has no feasible plan.
bool is_supply_shortfall(std::string_view violation);

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON; line and column are 1-based.
class ParseError : public InstanceError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed JSON that does not describe an instance (missing or unknown
// field, wrong type, negative demand).
class SemanticError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

// The instance parsed but breaks one or more invariants.
class ValidationError : public InstanceError {
 public:
  explicit ValidationError(ValidationReport violations);
  const ValidationReport& violations() const { return violations_; }

 private:
  ValidationReport violations_;
};

ProblemInstance parse_instance(std::string_view text);
ProblemInstance parse_instance(std::istream& in);
ProblemInstance load_instance(const std::string& path);

// Canonical text: fixed key order, terminating rationals as JSON numbers,
// everything else as "p/q" strings.
std::string serialize_instance(const ProblemInstance& instance);

// The two-ingredient, six-period instance used throughout the documentation
// and golden tests.
ProblemInstance base_instance();

}  // namespace coqplan
