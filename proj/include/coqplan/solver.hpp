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

// Exact optimization over the COQ catalog.
//
// The fixed ordering cost is the only link between ingredients, so the
// search walks the subsets Y of order periods depth-first (one period bit
// per level) and, for each ingredient independently, keeps the set of
// reachable (inventory, cost) labels. Labels are exact: quantities and money
// are mapped to scaled integers whose scale is derived from the instance.
// A label is dropped when another label with more inventory is cheaper even
// after paying to hold the extra stock until the horizon. Subtrees are cut
// when an optimistic bound (cheapest unit price for every missing unit)
// exceeds the incumbent.
//
// Among equal-cost optima the plan with fewer order periods wins, then the
// lexicographically smallest quantity vector (ingredient-major).

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "coqplan/coqgen.hpp"
#include "coqplan/costmodel.hpp"
#include "coqplan/instance.hpp"

namespace coqplan {

struct SolveOptions {
  std::optional<std::chrono::duration<double>> time_limit;
  unsigned jobs = 1;
  std::optional<ProcurementPlan> incumbent_seed;
  std::uint64_t brute_force_cap = 1'000'000;
};

struct SearchStats {
  std::uint64_t subsets_examined = 0;  // complete order-period subsets evaluated
  std::uint64_t subsets_pruned = 0;    // subtrees cut by bound or infeasibility
  std::uint64_t memo_states = 0;       // inventory labels kept
  std::chrono::duration<double> elapsed{0};
};

struct SolveResult {
  ProcurementPlan plan;
  InventoryTrajectory trajectory;
  CostBreakdown costs;
  SearchStats stats;
  bool proven_optimal = true;
  bool from_seed = false;  // no catalog plan was at least as cheap as the seed
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleInstance : public SolverError {
 public:
  using SolverError::SolverError;
};

class CapExceeded : public SolverError {
 public:
  using SolverError::SolverError;
};

// Raised only when the time limit expires before any feasible plan is known.
class TimeLimitExceeded : public SolverError {
 public:
  using SolverError::SolverError;
};

SolveResult solve(const ProblemInstance& instance, const CoqCatalog& catalog, const SolveOptions& options = {});

// Convenience overload that builds the catalog.
SolveResult solve(const ProblemInstance& instance, const SolveOptions& options = {});

// Exhaustive enumeration of every catalog combination; a test oracle.
SolveResult brute_force_solve(const ProblemInstance& instance, const CoqCatalog& catalog,
                              const SolveOptions& options = {});

// Exact minimum over all plans with q in {0, step, 2 step, ...} (ignores the
// catalog). Only for tiny instances.
SolveResult grid_solve(const ProblemInstance& instance, const Quantity& step, const SolveOptions& options = {});

// Total order used to pick among equal-cost optima: true when `a` is
// preferred over `b` (cost, then order-period count, then lexicographic).
bool preferred_plan(const Money& cost_a, const ProcurementPlan& a, const Money& cost_b, const ProcurementPlan& b);

}  // namespace coqplan
