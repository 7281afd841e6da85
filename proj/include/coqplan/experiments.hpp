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

// Parameter scenarios and the benchmark harness.
//
// Scenario JSON:
//   { "name": "holding-low",
//     "overrides": { "ordering_cost": 100,
//                    "holding_cost": {"j1": 0.5},
//                    "prices": {"j1": [15, 14.5, 14]} } }
// Every override is optional. Values may be numbers or "p/q" strings.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coqplan/instance.hpp"
#include "coqplan/solver.hpp"

namespace coqplan {

struct Scenario {
  std::string name;
  std::optional<Money> ordering_cost;
  std::map<std::string, Money> holding_cost;        // by ingredient id
  std::map<std::string, std::vector<Money>> prices;  // one price per level

  bool empty() const { return !ordering_cost && holding_cost.empty() && prices.empty(); }
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

// Returns a modified copy. Unknown ingredient ids and price lists of the
// wrong length raise SemanticError; an invalid result raises ValidationError.
ProblemInstance apply_scenario(const ProblemInstance& instance, const Scenario& scenario);

// holding-low, holding-high, ordering-low, ordering-high, discount-low,
// discount-high. The discount scenarios name ingredients j1 and j2.
std::vector<Scenario> builtin_scenarios();

struct ScenarioOutcome {
  std::string name;
  ProblemInstance instance;
  SolveResult result;
};

// Solves the unmodified instance (named "base") and then each scenario.
std::vector<ScenarioOutcome> sensitivity_suite(const ProblemInstance& instance, const SolveOptions& options = {},
                                               const std::vector<Scenario>& scenarios = builtin_scenarios());

struct BenchCase {
  std::size_t ingredients = 1;
  std::size_t levels = 1;
  std::size_t periods = 1;
  std::uint64_t seed = 0;

  bool operator==(const BenchCase&) const = default;
};

// Seeded random instance:
//   demands      uniform integers in [100, 300]
//   blend factor uniform integer in [1, 6]
//   thresholds   l_1 = 1, l_2 = alpha * (mean demand) * g, l_{n+1} = l_n * g,
//                g uniform in [1.5, 3] (two decimals)
//   prices       first level uniform integer in [10, 30], each next level
//                5% to 20% cheaper (whole percent)
//   capacity     max(2 * total ingredient demand, last threshold + total demand)
//   a            uniform integer in [100, 1000]
//   h            uniform in [0.5, 2] on a 0.05 grid
ProblemInstance generate_instance(const BenchCase& bench);

// Ingredients {3, 4} x levels {3, 4} x periods {6, 8, 10, 12}, all with
// the given seed.
std::vector<BenchCase> scaling_grid(std::uint64_t seed);

struct BenchRow {
  BenchCase bench;
  std::optional<Money> total_cost;  // none when no plan was found in time
  bool proven_optimal = false;
  double elapsed_ms = 0;
  SearchStats stats;
};

// Cases run one after another in grid order; a time limit applies per case.
std::vector<BenchRow> run_benchmark(const std::vector<BenchCase>& grid, const SolveOptions& options = {});

// case,ingredients,levels,periods,seed,tc,elapsed_ms,subsets,memo_states.
// tc is "time-limit" when the case was not solved to optimality.
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace coqplan
