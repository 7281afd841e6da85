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

TEST_CASE("base instance optimum") {
  const ProblemInstance inst = base_instance();
  const SolveResult r = solve(inst);
  CHECK(r.proven_optimal);
  CHECK_FALSE(r.from_seed);
  CHECK(r.costs.total == 117225);
  CHECK(r.plan == testing::reference_base_plan());
  CHECK(evaluate_plan(inst, r.plan).costs == r.costs);
  const CoqCatalog cat = CoqCatalog::build(inst);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t t = 0; t < 6; ++t) CHECK(cat.at(j, t).contains(r.plan(j, t)));
  }
}

TEST_CASE("toy instance") {
  const SolveResult r = solve(testing::toy_instance());
  CHECK(r.costs.total == make_rational(165, 2));
  CHECK(r.plan(0, 0) == 7);
}

TEST_CASE("solve matches brute force on small instances") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int i = 0; i < 40; ++i) {
    const ProblemInstance inst = testing::random_small_instance(rng, 2, 3, 2, 30);
    const CoqCatalog cat = CoqCatalog::build(inst);
    if (cat.combination_count() > 200'000) continue;
    SolveResult fast, slow;
    try {
      fast = solve(inst, cat);
    } catch (const InfeasibleInstance&) {
      CHECK_THROWS_AS(brute_force_solve(inst, cat), InfeasibleInstance);
      continue;
    }
    slow = brute_force_solve(inst, cat);
    CHECK(fast.costs.total == slow.costs.total);
    CHECK(fast.plan == slow.plan);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("jobs do not change the result") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const ProblemInstance inst = testing::random_small_instance(rng, 3, 6, 3, 60);
    SolveOptions one, four;
    four.jobs = 4;
    try {
      const SolveResult a = solve(inst, one);
      const SolveResult b = solve(inst, four);
      CHECK(a.costs == b.costs);
      CHECK(a.plan == b.plan);
    } catch (const InfeasibleInstance&) {
      CHECK_THROWS_AS(solve(inst, four), InfeasibleInstance);
    }
  }
}

TEST_CASE("incumbent seed") {
  const ProblemInstance inst = base_instance();
  SolveOptions opts;
  opts.incumbent_seed = testing::reference_base_plan();
  SolveResult r = solve(inst, opts);
  CHECK(r.costs.total == 117225);
  CHECK_FALSE(r.from_seed);

  // A feasible seed that is not in the catalog: one order per period.
  ProcurementPlan lfl = empty_plan(inst);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t t = 0; t < 6; ++t) lfl(j, t) = inst.ingredient_demand(j, t);
  }
  opts.incumbent_seed = lfl;
  r = solve(inst, opts);
  CHECK(r.costs.total == 117225);
}

TEST_CASE("seed cheaper than every catalog plan wins") {
  // The holding-high published plan is outside the catalog and cheaper.
  const ProblemInstance inst = apply_scenario(base_instance(), builtin_scenarios()[1]);
  SolveOptions opts;
  opts.incumbent_seed = testing::published_scenario_plans()[1].plan;
  const SolveResult r = solve(inst, opts);
  CHECK(r.from_seed);
  CHECK(r.costs.total == evaluate_plan(inst, *opts.incumbent_seed).costs.total);
}

TEST_CASE("infeasible instances") {
  ProblemInstance inst = testing::toy_instance();
  inst.ingredients[0].capacity = 5;
  inst.demands = {Rational(10), Rational(0)};
  CHECK_THROWS_AS(solve(inst), InfeasibleInstance);
  inst.demands = {Rational(1), Rational(1)};
  inst.ingredients[0].levels[0].min_qty = 7;
  inst.ingredients[0].capacity = 8;
  // Total demand 2 is below the minimum order but one order still covers it.
  CHECK(solve(inst).costs.total > 0);
}

TEST_CASE("brute force cap") {
  SolveOptions opts;
  opts.brute_force_cap = 10;
  const ProblemInstance inst = base_instance();
  CHECK_THROWS_AS(brute_force_solve(inst, CoqCatalog::build(inst), opts), CapExceeded);
}

TEST_CASE("grid solve agrees on the toy instance") {
  const ProblemInstance inst = testing::toy_instance();
  const SolveResult g = grid_solve(inst, Quantity(1));
  CHECK(g.costs.total == make_rational(165, 2));
  ProblemInstance longer = inst;
  longer.demands.assign(25, Rational(1));
  CHECK_THROWS_AS(grid_solve(longer, Quantity(1)), CapExceeded);
}

TEST_CASE("time limit") {
  const ProblemInstance inst = base_instance();
  SolveOptions opts;
  opts.time_limit = std::chrono::duration<double>(0);
  opts.incumbent_seed = testing::reference_base_plan();
  const SolveResult r = solve(inst, opts);
  CHECK_FALSE(r.proven_optimal);
  CHECK(r.costs.total <= 117225);
}

TEST_CASE("preferred plan order") {
  const ProcurementPlan a = testing::plan_of({1, 0}, {1, 0});
  const ProcurementPlan b = testing::plan_of({1, 1}, {0, 0});
  const ProcurementPlan c = testing::plan_of({1, 0}, {0, 1});
  CHECK(preferred_plan(Money(1), b, Money(2), a));
  CHECK(preferred_plan(Money(2), a, Money(2), b));
  CHECK_FALSE(preferred_plan(Money(2), b, Money(2), a));
  // a orders in one period, c in two.
  CHECK(preferred_plan(Money(2), a, Money(2), c));
  CHECK_FALSE(preferred_plan(Money(2), c, Money(2), a));
  CHECK_FALSE(preferred_plan(Money(2), a, Money(2), a));
}
