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

#include <random>

#include "coqplan/solver.hpp"
#include "test_support.hpp"

using namespace coqplan;

namespace {

ProblemInstance scale_costs(ProblemInstance inst, const Rational& factor) {
  inst.ordering_cost *= factor;
  for (auto& ing : inst.ingredients) {
    ing.holding_cost *= factor;
    for (auto& level : ing.levels) level.unit_price *= factor;
  }
  return inst;
}

}  // namespace

TEST_CASE("cost identities on random plans") {
  std::mt19937_64 rng(20261015);
  for (int i = 0; i < 300; ++i) {
    const ProblemInstance inst = testing::random_small_instance(rng, 3, 6, 3, 60);
    const ProcurementPlan plan = testing::random_feasible_plan(inst, rng);
    const PlanEvaluation ev = evaluate_plan(inst, plan);
    REQUIRE(ev.feasibility.feasible);
    CHECK(ev.costs.total == ev.costs.purchasing + ev.costs.ordering + ev.costs.holding);
    for (std::size_t j = 0; j < inst.num_ingredients(); ++j) {
      Quantity in = 0, used = 0;
      for (std::size_t t = 0; t < inst.periods(); ++t) {
        in += plan(j, t);
        used += inst.ingredient_demand(j, t);
        CHECK(ev.trajectory.levels(j, t) == in - used);
      }
    }
    const Rational factor = make_rational(testing::uniform(rng, 1, 9), testing::uniform(rng, 1, 9));
    const PlanEvaluation scaled = evaluate_plan(scale_costs(inst, factor), plan);
    CHECK(scaled.costs.purchasing == ev.costs.purchasing * factor);
    CHECK(scaled.costs.ordering == ev.costs.ordering * factor);
    CHECK(scaled.costs.holding == ev.costs.holding * factor);
  }
}

TEST_CASE("optimal orders come from the catalog") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const ProblemInstance inst = testing::random_small_instance(rng, 3, 6, 3, 60);
    const CoqCatalog cat = CoqCatalog::build(inst);
    SolveResult r;
    try {
      r = solve(inst, cat);
    } catch (const InfeasibleInstance&) {
      continue;
    }
    CHECK(evaluate_plan(inst, r.plan).feasibility.feasible);
    for (std::size_t j = 0; j < inst.num_ingredients(); ++j) {
      for (std::size_t t = 0; t < inst.periods(); ++t) CHECK(cat.at(j, t).contains(r.plan(j, t)));
    }
  }
}

TEST_CASE("optimum scales with costs") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const ProblemInstance inst = testing::random_small_instance(rng, 2, 5, 3, 50);
    SolveResult a;
    try {
      a = solve(inst);
    } catch (const InfeasibleInstance&) {
      continue;
    }
    const SolveResult b = solve(scale_costs(inst, Rational(3)));
    CHECK(b.costs.total == a.costs.total * 3);
  }
}

TEST_CASE("raising the ordering cost never lowers the optimum") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 20; ++i) {
    ProblemInstance inst = testing::random_small_instance(rng, 2, 5, 3, 50);
    SolveResult a;
    try {
      a = solve(inst);
    } catch (const InfeasibleInstance&) {
      continue;
    }
    inst.ordering_cost += 50;
    CHECK(solve(inst).costs.total >= a.costs.total);
  }
}
