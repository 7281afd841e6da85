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

#include "coqplan/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

#include "exact_json.hpp"

namespace coqplan {
namespace {

using detail::Json;

Rational uniform_int(std::mt19937_64& rng, long lo, long hi) {
  return Rational(std::uniform_int_distribution<long>(lo, hi)(rng));
}

// Uniform on {lo, lo + 1/den, ..., hi}.
Rational uniform_grid(std::mt19937_64& rng, long lo_num, long hi_num, long den) {
  return make_rational(std::uniform_int_distribution<long>(lo_num, hi_num)(rng), den);
}

Rational ceil_rational(const Rational& v) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return Rational(q);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const Json root = detail::parse_exact_json(text);
  if (!root.is_object()) throw SemanticError("scenario: expected an object");
  detail::reject_unknown_fields(root, {"name", "overrides"}, "scenario");
  Scenario s;
  const Json& name = detail::require_field(root, "name", "scenario");
  if (!detail::is_plain_string(name)) throw SemanticError("name: expected a string");
  s.name = name.get<std::string>();
  if (!root.contains("overrides")) return s;

  const Json& ov = root.at("overrides");
  if (!ov.is_object()) throw SemanticError("overrides: expected an object");
  detail::reject_unknown_fields(ov, {"ordering_cost", "holding_cost", "prices"}, "overrides");
  if (ov.contains("ordering_cost")) {
    s.ordering_cost = detail::json_rational(ov.at("ordering_cost"), "overrides.ordering_cost");
  }
  if (ov.contains("holding_cost")) {
    const Json& h = ov.at("holding_cost");
    if (!h.is_object()) throw SemanticError("overrides.holding_cost: expected an object");
    for (const auto& [id, value] : h.items()) {
      s.holding_cost[id] = detail::json_rational(value, "overrides.holding_cost." + id);
    }
  }
  if (ov.contains("prices")) {
    const Json& p = ov.at("prices");
    if (!p.is_object()) throw SemanticError("overrides.prices: expected an object");
    for (const auto& [id, list] : p.items()) {
      const std::string where = "overrides.prices." + id;
      if (!list.is_array()) throw SemanticError(where + ": expected an array");
      auto& out = s.prices[id];
      for (std::size_t n = 0; n < list.size(); ++n) {
        out.push_back(detail::json_rational(list[n], where + "[" + std::to_string(n) + "]"));
      }
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_scenario(text);
}

std::string serialize_scenario(const Scenario& s) {
  std::string out = "{\n  \"name\": ";
  detail::append_string(out, s.name);
  out += ",\n  \"overrides\": {";
  bool first = true;
  auto key = [&](const char* k) {
    out += first ? "\n    " : ",\n    ";
    first = false;
    detail::append_string(out, k);
    out += ": ";
  };
  if (s.ordering_cost) {
    key("ordering_cost");
    detail::append_rational(out, *s.ordering_cost);
  }
  if (!s.holding_cost.empty()) {
    key("holding_cost");
    out += "{";
    bool inner = true;
    for (const auto& [id, h] : s.holding_cost) {
      if (!inner) out += ", ";
      inner = false;
      detail::append_string(out, id);
      out += ": ";
      detail::append_rational(out, h);
    }
    out += "}";
  }
  if (!s.prices.empty()) {
    key("prices");
    out += "{";
    bool inner = true;
    for (const auto& [id, list] : s.prices) {
      if (!inner) out += ", ";
      inner = false;
      detail::append_string(out, id);
      out += ": [";
      for (std::size_t n = 0; n < list.size(); ++n) {
        if (n) out += ", ";
        detail::append_rational(out, list[n]);
      }
      out += "]";
    }
    out += "}";
  }
  out += first ? "}\n}\n" : "\n  }\n}\n";
  return out;
}

ProblemInstance apply_scenario(const ProblemInstance& instance, const Scenario& scenario) {
  ProblemInstance out = instance;
  if (scenario.ordering_cost) out.ordering_cost = *scenario.ordering_cost;
  auto lookup = [&](const std::string& id) -> IngredientSpec& {
    auto j = out.find_ingredient(id);
    if (!j) throw SemanticError("scenario '" + scenario.name + "': unknown ingredient '" + id + "'");
    return out.ingredients[*j];
  };
  for (const auto& [id, h] : scenario.holding_cost) lookup(id).holding_cost = h;
  for (const auto& [id, list] : scenario.prices) {
    auto& ing = lookup(id);
    if (list.size() != ing.levels.size()) {
      throw SemanticError("scenario '" + scenario.name + "': ingredient '" + id + "' has " +
                          std::to_string(ing.levels.size()) + " levels but " + std::to_string(list.size()) +
                          " prices were given");
    }
    for (std::size_t n = 0; n < list.size(); ++n) ing.levels[n].unit_price = list[n];
  }
  if (auto violations = validate(out); !violations.empty()) throw ValidationError(std::move(violations));
  return out;
}

std::vector<Scenario> builtin_scenarios() {
  auto holding = [](const char* name, const Rational& h) {
    Scenario s;
    s.name = name;
    s.holding_cost = {{"j1", h}, {"j2", h}};
    return s;
  };
  auto ordering = [](const char* name, long a) {
    Scenario s;
    s.name = name;
    s.ordering_cost = Rational(a);
    return s;
  };
  auto discount = [](const char* name, std::vector<Money> j1, std::vector<Money> j2) {
    Scenario s;
    s.name = name;
    s.prices = {{"j1", std::move(j1)}, {"j2", std::move(j2)}};
    return s;
  };
  return {
      holding("holding-low", make_rational(1, 2)),
      holding("holding-high", Rational(2)),
      ordering("ordering-low", 100),
      ordering("ordering-high", 2500),
      discount("discount-low", {Rational(15), make_rational(29, 2), Rational(14)},
               {Rational(12), make_rational(23, 2), Rational(11)}),
      discount("discount-high", {Rational(15), Rational(10), Rational(5)}, {Rational(12), Rational(9), Rational(6)}),
  };
}

std::vector<ScenarioOutcome> sensitivity_suite(const ProblemInstance& instance, const SolveOptions& options,
                                               const std::vector<Scenario>& scenarios) {
  std::vector<ScenarioOutcome> out;
  out.push_back({"base", instance, solve(instance, options)});
  for (const auto& s : scenarios) {
    ProblemInstance modified = apply_scenario(instance, s);
    SolveResult result = solve(modified, options);
    out.push_back({s.name, std::move(modified), std::move(result)});
  }
  return out;
}

ProblemInstance generate_instance(const BenchCase& bench) {
  if (bench.ingredients == 0 || bench.levels == 0 || bench.periods == 0) {
    throw std::invalid_argument("bench case counts must be at least 1");
  }
  std::mt19937_64 rng(bench.seed);
  ProblemInstance inst;
  inst.ordering_cost = uniform_int(rng, 100, 1000);
  Rational total_demand = 0;
  for (std::size_t t = 0; t < bench.periods; ++t) {
    inst.demands.push_back(uniform_int(rng, 100, 300));
    total_demand += inst.demands.back();
  }
  const Rational mean_demand = total_demand / static_cast<long>(bench.periods);

  for (std::size_t j = 0; j < bench.ingredients; ++j) {
    IngredientSpec ing;
    ing.id = "j" + std::to_string(j + 1);
    ing.alpha = uniform_int(rng, 1, 6);
    ing.holding_cost = uniform_grid(rng, 10, 40, 20);
    Rational price = uniform_int(rng, 10, 30);
    Rational threshold = 1;
    for (std::size_t n = 0; n < bench.levels; ++n) {
      if (n == 1) {
        threshold = ceil_rational(ing.alpha * mean_demand * uniform_grid(rng, 150, 300, 100));
      } else if (n > 1) {
        threshold = ceil_rational(threshold * uniform_grid(rng, 150, 300, 100));
      }
      if (n > 0) price = price * make_rational(100 - std::uniform_int_distribution<long>(5, 20)(rng), 100);
      ing.levels.push_back({threshold, price});
    }
    const Rational horizon = ing.alpha * total_demand;
    ing.capacity = std::max(Rational(2 * horizon), Rational(threshold + horizon));
    inst.ingredients.push_back(std::move(ing));
  }
  return inst;
}

std::vector<BenchCase> scaling_grid(std::uint64_t seed) {
  std::vector<BenchCase> grid;
  for (std::size_t ingredients : {3, 4}) {
    for (std::size_t levels : {3, 4}) {
      for (std::size_t periods : {6, 8, 10, 12}) grid.push_back({ingredients, levels, periods, seed});
    }
  }
  return grid;
}

std::vector<BenchRow> run_benchmark(const std::vector<BenchCase>& grid, const SolveOptions& options) {
  std::vector<BenchRow> rows;
  for (const auto& bench : grid) {
    BenchRow row;
    row.bench = bench;
    const auto start = std::chrono::steady_clock::now();
    try {
      SolveResult result = solve(generate_instance(bench), options);
      row.total_cost = result.costs.total;
      row.proven_optimal = result.proven_optimal;
      row.stats = result.stats;
    } catch (const TimeLimitExceeded&) {
      row.proven_optimal = false;
    }
    row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "case,ingredients,levels,periods,seed,tc,elapsed_ms,subsets,memo_states\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    char elapsed[32];
    std::snprintf(elapsed, sizeof elapsed, "%.3f", r.elapsed_ms);
    out << i + 1 << ',' << r.bench.ingredients << ',' << r.bench.levels << ',' << r.bench.periods << ','
        << r.bench.seed << ',' << (r.proven_optimal && r.total_cost ? format_exact(*r.total_cost) : "time-limit")
        << ',' << elapsed << ',' << r.stats.subsets_examined << ',' << r.stats.memo_states << '\n';
  }
}

}  // namespace coqplan
