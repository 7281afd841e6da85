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

#include "coqplan/costmodel.hpp"

namespace coqplan {
namespace {

std::string cell_name(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  return instance.ingredients[j].id + " period " + std::to_string(t + 1);
}

void require_shape(const ProblemInstance& instance, const ProcurementPlan& plan) {
  if (plan.ingredients() != instance.num_ingredients() || plan.periods() != instance.periods()) {
    throw std::invalid_argument("plan dimensions do not match the instance");
  }
}

}  // namespace

ProcurementPlan make_plan(const std::vector<std::vector<Quantity>>& rows) {
  const std::size_t periods = rows.empty() ? 0 : rows.front().size();
  ProcurementPlan plan(rows.size(), periods, Quantity(0));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != periods) throw std::invalid_argument("ragged plan rows");
    for (std::size_t t = 0; t < periods; ++t) plan(j, t) = rows[j][t];
  }
  return plan;
}

std::optional<std::size_t> discount_level(const IngredientSpec& ingredient, const Quantity& q) {
  if (q == 0) return std::nullopt;
  if (q < ingredient.min_order()) {
    throw QuantityOutOfRange("order " + format_exact(q) + " of " + ingredient.id + " is below the minimum " +
                             format_exact(ingredient.min_order()));
  }
  if (q > ingredient.capacity) {
    throw QuantityOutOfRange("order " + format_exact(q) + " of " + ingredient.id + " exceeds capacity " +
                             format_exact(ingredient.capacity));
  }
  std::size_t n = 0;
  while (n + 1 < ingredient.levels.size() && ingredient.levels[n + 1].min_qty <= q) ++n;
  return n;
}

std::optional<Money> unit_price(const IngredientSpec& ingredient, const Quantity& q) {
  auto level = discount_level(ingredient, q);
  if (!level) return std::nullopt;
  return ingredient.levels[*level].unit_price;
}

Money purchase_cost(const IngredientSpec& ingredient, const Quantity& q) {
  auto price = unit_price(ingredient, q);
  return price ? Money(q * *price) : Money(0);
}

PlanEvaluation evaluate_plan(const ProblemInstance& instance, const ProcurementPlan& plan) {
  require_shape(instance, plan);
  const std::size_t J = instance.num_ingredients();
  const std::size_t T = instance.periods();

  PlanEvaluation eval;
  auto& traj = eval.trajectory;
  traj.levels = PeriodMatrix<Quantity>(J, T, Quantity(0));
  traj.order_flags.assign(T, false);
  traj.discount_levels = PeriodMatrix<std::optional<std::size_t>>(J, T);
  auto& violations = eval.feasibility.violations;

  for (std::size_t j = 0; j < J; ++j) {
    const auto& ing = instance.ingredients[j];
    Quantity inventory = 0;
    bool short_reported = false;
    for (std::size_t t = 0; t < T; ++t) {
      const Quantity& q = plan(j, t);
      const Quantity demand = instance.ingredient_demand(j, t);
      if (q < 0) {
        violations.push_back({16, j, t, "negative order " + format_exact(q) + " for " + cell_name(instance, j, t)});
      } else if (q > 0) {
        traj.order_flags[t] = true;
        if (q < ing.min_order()) {
          violations.push_back({13, j, t,
                                "order " + format_exact(q) + " below the minimum discount quantity " +
                                    format_exact(ing.min_order()) + " for " + cell_name(instance, j, t)});
        } else if (q > ing.capacity) {
          violations.push_back({14, j, t,
                                "order " + format_exact(q) + " exceeds capacity " + format_exact(ing.capacity) +
                                    " for " + cell_name(instance, j, t)});
        } else {
          auto level = discount_level(ing, q);
          traj.discount_levels(j, t) = level;
          eval.costs.purchasing += q * ing.levels[*level].unit_price;
        }
      }
      inventory += q - demand;
      traj.levels(j, t) = inventory;
      if (inventory < 0 && !short_reported) {
        violations.push_back({16, j, t,
                              "inventory " + format_exact(inventory) + " is negative for " + cell_name(instance, j, t)});
        short_reported = true;
      }
      // Negative inventory enters as-is so the breakdown stays total.
      eval.costs.holding += ing.holding_cost * (inventory + demand / 2);
    }
  }
  for (bool flag : traj.order_flags) {
    if (flag) eval.costs.ordering += instance.ordering_cost;
  }
  eval.costs.total = eval.costs.purchasing + eval.costs.ordering + eval.costs.holding;
  eval.feasibility.feasible = violations.empty();
  return eval;
}

FeasibilityReport check_trajectory(const ProblemInstance& instance, const ProcurementPlan& plan,
                                   const InventoryTrajectory& trajectory) {
  require_shape(instance, plan);
  const std::size_t J = instance.num_ingredients();
  const std::size_t T = instance.periods();
  FeasibilityReport report;
  auto add = [&](int c, std::size_t j, std::size_t t, std::string detail) {
    report.violations.push_back({c, j, t, std::move(detail) + " for " + cell_name(instance, j, t)});
  };
  if (trajectory.levels.ingredients() != J || trajectory.levels.periods() != T ||
      trajectory.order_flags.size() != T || trajectory.discount_levels.ingredients() != J ||
      trajectory.discount_levels.periods() != T) {
    throw std::invalid_argument("trajectory dimensions do not match the instance");
  }

  for (std::size_t j = 0; j < J; ++j) {
    const auto& ing = instance.ingredients[j];
    for (std::size_t t = 0; t < T; ++t) {
      const Quantity& q = plan(j, t);
      const Quantity& level_now = trajectory.levels(j, t);
      const Quantity previous = t == 0 ? Quantity(0) : trajectory.levels(j, t - 1);
      if (level_now != previous + q - instance.ingredient_demand(j, t)) {
        add(12, j, t, "inventory balance broken");
      }
      const auto& selected = trajectory.discount_levels(j, t);
      if (selected && *selected >= ing.levels.size()) {
        add(17, j, t, "discount level index out of range");
        continue;
      }
      if (selected && q < ing.levels[*selected].min_qty) {
        add(13, j, t, "order " + format_exact(q) + " below selected level bound");
      }
      const Quantity cap = selected ? ing.capacity : Quantity(0);
      if (q > cap) add(14, j, t, "order " + format_exact(q) + " exceeds " + format_exact(cap));
      if (selected && !trajectory.order_flags[t]) add(15, j, t, "discount level selected without order flag");
      if (q < 0) add(16, j, t, "negative order");
      if (level_now < 0) add(16, j, t, "negative inventory");
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

std::vector<BlendDeviation> blend_alignment(const ProblemInstance& instance, const ProcurementPlan& plan) {
  require_shape(instance, plan);
  const auto eval = evaluate_plan(instance, plan);
  std::vector<BlendDeviation> out;
  for (std::size_t t = 0; t < instance.periods(); ++t) {
    for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
      for (std::size_t k = j + 1; k < instance.num_ingredients(); ++k) {
        const Rational ideal = instance.ingredients[j].alpha / instance.ingredients[k].alpha;
        BlendDeviation dev;
        dev.period = t;
        dev.first = j;
        dev.second = k;
        if (plan(k, t) != 0) dev.order_deviation = Rational(plan(j, t) / plan(k, t) - ideal);
        const auto& inv = eval.trajectory.levels;
        if (inv(k, t) != 0) dev.inventory_deviation = Rational(inv(j, t) / inv(k, t) - ideal);
        out.push_back(std::move(dev));
      }
    }
  }
  return out;
}

}  // namespace coqplan
