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

// Price function, cost components, inventory dynamics and feasibility
// checks for procurement plans.
//
// Cost model:
//   PC = sum_{j,t} q_{j,t} * price_j(q_{j,t})
//   OC = a * |{t : some q_{j,t} > 0}|
//   HC = sum_{j,t} h_j * (I_{j,t} + alpha_j d_t / 2)
//   TC = PC + OC + HC
// with I_{j,t} = I_{j,t-1} + q_{j,t} - alpha_j d_t and I_{j,0} = 0.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coqplan/instance.hpp"
#include "coqplan/rational.hpp"

namespace coqplan {

// Dense ingredient-by-period matrix, row-major.
template <class T>
class PeriodMatrix {
 public:
  PeriodMatrix() = default;
  PeriodMatrix(std::size_t ingredients, std::size_t periods, const T& fill = T())
      : ingredients_(ingredients), periods_(periods), data_(ingredients * periods, fill) {}

  std::size_t ingredients() const { return ingredients_; }
  std::size_t periods() const { return periods_; }

  T& operator()(std::size_t j, std::size_t t) { return data_[j * periods_ + t]; }
  const T& operator()(std::size_t j, std::size_t t) const { return data_[j * periods_ + t]; }

  bool operator==(const PeriodMatrix&) const = default;

 private:
  std::size_t ingredients_ = 0;
  std::size_t periods_ = 0;
  std::vector<T> data_;
};

using ProcurementPlan = PeriodMatrix<Quantity>;

inline ProcurementPlan empty_plan(const ProblemInstance& instance) {
  return ProcurementPlan(instance.num_ingredients(), instance.periods(), Quantity(0));
}

// Builds a plan from per-ingredient rows of quantities.
ProcurementPlan make_plan(const std::vector<std::vector<Quantity>>& rows);

struct InventoryTrajectory {
  PeriodMatrix<Quantity> levels;                        // end-of-period inventory
  std::vector<bool> order_flags;                        // y_t
  PeriodMatrix<std::optional<std::size_t>> discount_levels;  // zero-based level, none when q = 0

  bool operator==(const InventoryTrajectory&) const = default;
};

struct CostBreakdown {
  Money purchasing = 0;
  Money ordering = 0;
  Money holding = 0;
  Money total = 0;

  bool operator==(const CostBreakdown&) const = default;
};

struct ConstraintViolation {
  int constraint = 0;  // 12..17, numbered as in the baseline model
  std::size_t ingredient = 0;
  std::size_t period = 0;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<ConstraintViolation> violations;
};

struct PlanEvaluation {
  InventoryTrajectory trajectory;
  CostBreakdown costs;
  FeasibilityReport feasibility;
};

class QuantityOutOfRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Zero-based discount level for q, or none for q = 0. The top level is
// closed at capacity. Throws QuantityOutOfRange for 0 < q < l_1 or q > u.
std::optional<std::size_t> discount_level(const IngredientSpec& ingredient, const Quantity& q);

// Unit price for q, or none for q = 0; throws like discount_level.
std::optional<Money> unit_price(const IngredientSpec& ingredient, const Quantity& q);

// q * unit_price(q), zero for q = 0.
Money purchase_cost(const IngredientSpec& ingredient, const Quantity& q);

PlanEvaluation evaluate_plan(const ProblemInstance& instance, const ProcurementPlan& plan);

// Checks an externally supplied trajectory (inventory, flags and selected
// levels) against the baseline constraints 12-17.
FeasibilityReport check_trajectory(const ProblemInstance& instance, const ProcurementPlan& plan,
                                   const InventoryTrajectory& trajectory);

struct BlendDeviation {
  std::size_t period = 0;
  std::size_t first = 0;   // ingredient j
  std::size_t second = 0;  // ingredient j' > j
  std::optional<Rational> order_deviation;      // q_j/q_j' - alpha_j/alpha_j'
  std::optional<Rational> inventory_deviation;  // I_j/I_j' - alpha_j/alpha_j'
};

// Diagnostic only: plans under quantity discounts routinely deviate from the
// blend ratio.
std::vector<BlendDeviation> blend_alignment(const ProblemInstance& instance, const ProcurementPlan& plan);

}  // namespace coqplan
