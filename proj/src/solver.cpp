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

#include "coqplan/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace coqplan {
namespace {

using Int = std::int64_t;
using Wide = __int128;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxQuantityBits = 50;
constexpr std::size_t kMaxMoneyBits = 60;
constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

Int to_int(const mpz_class& z, std::size_t max_bits, const char* what) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > max_bits) {
    throw SolverError(std::string("instance too large for exact scaled search (") + what + ")");
  }
  return z.get_si();
}

Int scaled_int(const Rational& value, const mpz_class& scale, std::size_t max_bits, const char* what) {
  Rational scaled = value * scale;
  scaled.canonicalize();
  if (scaled.get_den() != 1) throw std::logic_error("scaled value is not integral");
  return to_int(scaled.get_num(), max_bits, what);
}

Wide money_int(const Rational& value, const mpz_class& scale) {
  return scaled_int(value, scale, kMaxMoneyBits, "money");
}

// ---------------------------------------------------------------------------
// Scaled problem

struct Option {
  Int qty = 0;
  Wide cost = 0;          // purchase cost in money units
  std::uint32_t entry = 0;  // index into the CoqSet
  std::uint16_t level = 0;
};

struct ScaledIngredient {
  std::vector<Int> demand;     // per period
  std::vector<Int> remaining;  // remaining[t] = demand[t] + ... + demand[T-1]
  std::vector<std::vector<Option>> options;  // per period, ascending qty
  Wide hold = 0;       // per scaled unit per period
  Wide min_price = 0;  // per scaled unit at the cheapest level
};

struct ScaledProblem {
  std::size_t ingredients = 0;
  std::size_t periods = 0;
  mpz_class money_scale;
  Wide ordering = 0;
  Wide constant = 0;  // half-demand holding terms
  std::vector<ScaledIngredient> ing;
};

ScaledProblem scale_problem(const ProblemInstance& instance, const CoqCatalog& catalog) {
  const std::size_t J = instance.num_ingredients();
  const std::size_t T = instance.periods();
  ScaledProblem sp;
  sp.ingredients = J;
  sp.periods = T;
  sp.ing.resize(J);

  std::vector<mpz_class> qty_scale(J);
  std::vector<Rational> money_terms{instance.ordering_cost};
  Rational constant = 0;
  for (std::size_t j = 0; j < J; ++j) {
    const auto& ing = instance.ingredients[j];
    std::vector<Rational> quantities;
    for (std::size_t t = 0; t < T; ++t) {
      quantities.push_back(instance.ingredient_demand(j, t));
      for (const auto& e : catalog.at(j, t).entries) quantities.push_back(e.quantity);
      constant += ing.holding_cost * instance.ingredient_demand(j, t) / 2;
    }
    qty_scale[j] = denominator_lcm(quantities);
    money_terms.push_back(ing.holding_cost / qty_scale[j]);
    money_terms.push_back(ing.cheapest_price() / qty_scale[j]);
    for (std::size_t t = 0; t < T; ++t) {
      for (const auto& e : catalog.at(j, t).entries) money_terms.push_back(purchase_cost(ing, e.quantity));
    }
  }
  constant.canonicalize();
  money_terms.push_back(constant);
  sp.money_scale = denominator_lcm(money_terms);
  sp.ordering = money_int(instance.ordering_cost, sp.money_scale);
  sp.constant = money_int(constant, sp.money_scale);

  for (std::size_t j = 0; j < J; ++j) {
    const auto& ing = instance.ingredients[j];
    auto& out = sp.ing[j];
    out.hold = money_int(ing.holding_cost / qty_scale[j], sp.money_scale);
    out.min_price = money_int(ing.cheapest_price() / qty_scale[j], sp.money_scale);
    out.remaining.assign(T + 1, 0);
    out.options.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      out.demand.push_back(scaled_int(instance.ingredient_demand(j, t), qty_scale[j], kMaxQuantityBits, "demand"));
      const auto& set = catalog.at(j, t);
      for (std::size_t k = 0; k < set.size(); ++k) {
        const Quantity& q = set.quantity(k);
        Option opt;
        opt.qty = scaled_int(q, qty_scale[j], kMaxQuantityBits, "quantity");
        opt.cost = money_int(purchase_cost(ing, q), sp.money_scale);
        opt.entry = static_cast<std::uint32_t>(k);
        auto level = discount_level(ing, q);
        opt.level = static_cast<std::uint16_t>(level.value_or(0));
        out.options[t].push_back(opt);
      }
    }
    for (std::size_t t = T; t-- > 0;) out.remaining[t] = out.remaining[t + 1] + out.demand[t];
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Shared incumbent

struct Incumbent {
  bool found = false;
  Wide cost = 0;
  std::size_t orders = 0;
  std::vector<Int> lex;                 // scaled quantities, ingredient-major
  std::vector<std::uint32_t> entries;   // catalog entry per (j, t)

  bool beats(const Incumbent& other) const {
    if (!other.found) return true;
    if (cost != other.cost) return cost < other.cost;
    if (orders != other.orders) return orders < other.orders;
    return lex < other.lex;
  }
};

struct SharedState {
  std::mutex mutex;
  Incumbent best;
  std::optional<Wide> seed_cutoff;
  std::optional<Clock::time_point> deadline;
  std::atomic<bool> timed_out{false};
  std::atomic<std::uint64_t> examined{0};
  std::atomic<std::uint64_t> pruned{0};
  std::atomic<std::uint64_t> states{0};

  std::optional<Wide> cutoff() {
    std::lock_guard lock(mutex);
    std::optional<Wide> c = seed_cutoff;
    if (best.found && (!c || best.cost < *c)) c = best.cost;
    return c;
  }

  void offer(Incumbent&& candidate) {
    std::lock_guard lock(mutex);
    if (candidate.beats(best)) best = std::move(candidate);
  }
};

// ---------------------------------------------------------------------------
// Depth-first search over order-period subsets

struct Label {
  Int inventory = 0;
  Wide cost = 0;
  std::uint32_t parent = kNoParent;
  std::uint32_t option = 0;
};

class SubsetSearch {
 public:
  SubsetSearch(const ScaledProblem& problem, SharedState& shared) : p_(problem), shared_(shared) {
    stages_.assign(p_.periods + 1, std::vector<std::vector<Label>>(p_.ingredients));
    for (auto& start : stages_[0]) start.push_back(Label{});
  }

  // Follows a fixed prefix of period decisions, then searches the rest.
  void run(std::uint64_t prefix_mask, std::size_t prefix_len) {
    std::size_t orders = 0;
    for (std::size_t t = 0; t < prefix_len; ++t) {
      const bool in_y = (prefix_mask >> t) & 1u;
      if (!expand_all(t, in_y)) {
        shared_.pruned.fetch_add(1, std::memory_order_relaxed);
        return;
      }
      orders += in_y;
    }
    dfs(prefix_len, orders);
  }

  // Evaluates the subset with every period open; false when infeasible.
  bool run_all_open() {
    for (std::size_t t = 0; t < p_.periods; ++t) {
      if (!expand_all(t, true)) return false;
    }
    leaf();
    return true;
  }

 private:
  bool expired() {
    if (shared_.timed_out.load(std::memory_order_relaxed)) return true;
    if (shared_.deadline && Clock::now() > *shared_.deadline) {
      shared_.timed_out = true;
      return true;
    }
    return false;
  }

  void dfs(std::size_t t, std::size_t orders) {
    if (expired()) return;
    if (t == p_.periods) {
      leaf();
      return;
    }
    if (auto cut = shared_.cutoff(); cut && lower_bound(t, orders) > *cut) {
      shared_.pruned.fetch_add(1, std::memory_order_relaxed);
      return;
    }
    for (bool in_y : {false, true}) {
      if (!expand_all(t, in_y)) {
        shared_.pruned.fetch_add(1, std::memory_order_relaxed);
        continue;
      }
      dfs(t + 1, orders + (in_y ? 1 : 0));
    }
  }

  bool expand_all(std::size_t t, bool in_y) {
    for (std::size_t j = 0; j < p_.ingredients; ++j) {
      if (!expand(j, t, in_y)) return false;
    }
    return true;
  }

  Wide lower_bound(std::size_t t, std::size_t orders) const {
    Wide total = p_.ordering * static_cast<Wide>(orders) + p_.constant;
    bool needs_order = false;
    for (std::size_t j = 0; j < p_.ingredients; ++j) {
      const auto& data = p_.ing[j];
      const Int remaining = data.remaining[t];
      Wide best = std::numeric_limits<Wide>::max();
      bool all_short = true;
      for (const auto& label : stages_[t][j]) {
        const Int shortfall = std::max<Int>(0, remaining - label.inventory);
        best = std::min(best, label.cost + data.min_price * shortfall);
        if (shortfall == 0) all_short = false;
      }
      total += best;
      needs_order = needs_order || all_short;
    }
    if (needs_order) total += p_.ordering;
    return total;
  }

  struct Candidate {
    Int inventory;
    Wide cost;
    std::uint32_t parent;
    std::uint32_t option;
  };

  // Builds stage t+1 labels of ingredient j. Candidates are generated in
  // (parent rank, ascending quantity) order, which is the lexicographic order
  // of the quantity prefixes; that index is the tie-break rank.
  bool expand(std::size_t j, std::size_t t, bool in_y) {
    const auto& data = p_.ing[j];
    const auto& src = stages_[t][j];
    auto& dst = stages_[t + 1][j];
    const Int demand = data.demand[t];
    const Int remaining_after = data.remaining[t + 1];
    const auto& options = data.options[t];
    cands_.clear();

    for (std::uint32_t parent = 0; parent < src.size(); ++parent) {
      const Label& from = src[parent];
      const Int inventory = from.inventory;
      if (!in_y || inventory >= data.remaining[t]) {
        // Stock already covers the horizon; ordering more never helps.
        if (inventory >= demand) {
          const Int next = inventory - demand;
          cands_.push_back({next, from.cost + data.hold * next, parent, 0});
        }
        continue;
      }
      const Int needed = demand - inventory;
      auto it = options.begin();
      if (needed > 0) {
        it = std::lower_bound(options.begin(), options.end(), needed,
                              [](const Option& o, Int v) { return o.qty < v; });
      }
      std::uint64_t covering_levels = 0;
      for (; it != options.end(); ++it) {
        const Int next = inventory + it->qty - demand;
        if (it->qty > 0 && next >= remaining_after && it->level < 64) {
          // Within one price level, the smallest order that covers the rest
          // of the horizon beats every larger one.
          const std::uint64_t bit = std::uint64_t{1} << it->level;
          if (covering_levels & bit) continue;
          covering_levels |= bit;
        }
        cands_.push_back({next, from.cost + it->cost + data.hold * next, parent,
                          static_cast<std::uint32_t>(it - options.begin())});
      }
    }

    // Keep one label per inventory, then drop labels beaten by a label with
    // more stock after charging it for holding the surplus to the horizon.
    order_.resize(cands_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto& x = cands_[a];
      const auto& y = cands_[b];
      if (x.inventory != y.inventory) return x.inventory > y.inventory;
      if (x.cost != y.cost) return x.cost < y.cost;
      return a < b;
    });
    const Wide surplus_rate = data.hold * static_cast<Wide>(p_.periods - t - 1);
    kept_.clear();
    bool have_best = false;
    Wide best_key = 0;
    std::uint32_t best_rank = 0;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const std::uint32_t idx = order_[i];
      const auto& c = cands_[idx];
      if (i > 0 && cands_[order_[i - 1]].inventory == c.inventory) continue;
      const Wide key = c.cost + surplus_rate * c.inventory;
      if (have_best && (best_key < key || (best_key == key && best_rank < idx))) continue;
      kept_.push_back(idx);
      if (!have_best || key < best_key || (key == best_key && idx < best_rank)) {
        have_best = true;
        best_key = key;
        best_rank = idx;
      }
    }
    std::sort(kept_.begin(), kept_.end());
    dst.clear();
    dst.reserve(kept_.size());
    for (std::uint32_t idx : kept_) {
      const auto& c = cands_[idx];
      dst.push_back({c.inventory, c.cost, c.parent, c.option});
    }
    shared_.states.fetch_add(dst.size(), std::memory_order_relaxed);
    return !dst.empty();
  }

  void leaf() {
    shared_.examined.fetch_add(1, std::memory_order_relaxed);
    const std::size_t J = p_.ingredients;
    const std::size_t T = p_.periods;
    Incumbent cand;
    cand.found = true;
    cand.cost = p_.constant;
    cand.lex.assign(J * T, 0);
    cand.entries.assign(J * T, 0);
    std::vector<bool> ordered(T, false);
    for (std::size_t j = 0; j < J; ++j) {
      const auto& finals = stages_[T][j];
      std::uint32_t best = 0;
      for (std::uint32_t i = 1; i < finals.size(); ++i) {
        if (finals[i].cost < finals[best].cost) best = i;
      }
      cand.cost += finals[best].cost;
      std::uint32_t at = best;
      for (std::size_t t = T; t-- > 0;) {
        const Label& label = stages_[t + 1][j][at];
        const Option& opt = p_.ing[j].options[t][label.option];
        cand.lex[j * T + t] = opt.qty;
        cand.entries[j * T + t] = opt.entry;
        if (opt.qty > 0) ordered[t] = true;
        at = label.parent;
      }
    }
    cand.orders = static_cast<std::size_t>(std::count(ordered.begin(), ordered.end(), true));
    cand.cost += p_.ordering * static_cast<Wide>(cand.orders);
    shared_.offer(std::move(cand));
  }

  const ScaledProblem& p_;
  SharedState& shared_;
  std::vector<std::vector<std::vector<Label>>> stages_;  // [t][j]
  std::vector<Candidate> cands_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> kept_;
};

Wide floor_scaled(const Rational& value, const mpz_class& scale) {
  mpz_class num = value.get_num() * scale;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), value.get_den_mpz_t());
  if (mpz_sizeinbase(q.get_mpz_t(), 2) > 120) throw SolverError("seed plan cost out of range");
  const bool negative = sgn(q) < 0;
  mpz_class mag = abs(q);
  mpz_class hi = mag >> 64;
  mpz_class lo = mag - (hi << 64);
  Wide w = (static_cast<Wide>(hi.get_ui()) << 64) | static_cast<Wide>(lo.get_ui());
  return negative ? -w : w;
}

// Supply shortfalls are infeasibility, anything else is bad input.
void check_solvable(const ProblemInstance& instance) {
  auto violations = validate(instance);
  if (violations.empty()) return;
  if (std::all_of(violations.begin(), violations.end(), [](const std::string& v) { return is_supply_shortfall(v); })) {
    throw InfeasibleInstance(violations.front());
  }
  throw ValidationError(std::move(violations));
}

mpz_class wide_to_mpz(Wide w) {
  const bool negative = w < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(w) : static_cast<unsigned __int128>(w);
  mpz_class hi(static_cast<unsigned long>(mag >> 64));
  mpz_class out = (hi << 64) + mpz_class(static_cast<unsigned long>(mag));
  return negative ? mpz_class(-out) : out;
}

Money scaled_money(Wide w, const mpz_class& scale) {
  Money m(wide_to_mpz(w), scale);
  m.canonicalize();
  return m;
}

std::size_t order_periods(const ProcurementPlan& plan) {
  std::size_t count = 0;
  for (std::size_t t = 0; t < plan.periods(); ++t) {
    for (std::size_t j = 0; j < plan.ingredients(); ++j) {
      if (plan(j, t) > 0) {
        ++count;
        break;
      }
    }
  }
  return count;
}

SolveResult finish(const ProblemInstance& instance, ProcurementPlan plan) {
  SolveResult result;
  auto eval = evaluate_plan(instance, plan);
  result.plan = std::move(plan);
  result.trajectory = std::move(eval.trajectory);
  result.costs = eval.costs;
  return result;
}

}  // namespace

bool preferred_plan(const Money& cost_a, const ProcurementPlan& a, const Money& cost_b, const ProcurementPlan& b) {
  if (cost_a != cost_b) return cost_a < cost_b;
  const std::size_t oa = order_periods(a);
  const std::size_t ob = order_periods(b);
  if (oa != ob) return oa < ob;
  for (std::size_t j = 0; j < a.ingredients(); ++j) {
    for (std::size_t t = 0; t < a.periods(); ++t) {
      if (a(j, t) != b(j, t)) return a(j, t) < b(j, t);
    }
  }
  return false;
}

SolveResult solve(const ProblemInstance& instance, const CoqCatalog& catalog, const SolveOptions& options) {
  const auto start = Clock::now();
  if (!catalog.built_from(instance)) throw std::invalid_argument("catalog was built from a different instance");
  if (options.jobs == 0) throw std::invalid_argument("worker count must be at least 1");
  check_solvable(instance);

  const ScaledProblem problem = scale_problem(instance, catalog);
  SharedState shared;
  if (options.time_limit) {
    shared.deadline = start + std::chrono::duration_cast<Clock::duration>(*options.time_limit);
  }

  std::optional<Rational> seed_cost;
  if (options.incumbent_seed) {
    auto eval = evaluate_plan(instance, *options.incumbent_seed);
    if (eval.feasibility.feasible) {
      seed_cost = eval.costs.total;
      shared.seed_cutoff = floor_scaled(*seed_cost, problem.money_scale);
    }
  }

  // The all-open subset is the most permissive one: if it has no feasible
  // plan, no subset does.
  {
    SubsetSearch probe(problem, shared);
    if (!probe.run_all_open()) {
      throw InfeasibleInstance("no combination of catalog quantities covers the demand");
    }
  }

  const std::size_t T = problem.periods;
  if (options.jobs <= 1) {
    SubsetSearch search(problem, shared);
    search.run(0, 0);
  } else {
    std::size_t split = 0;
    while (split < T && (std::size_t{1} << split) < 4 * static_cast<std::size_t>(options.jobs)) ++split;
    const std::uint64_t tasks = std::uint64_t{1} << split;
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < options.jobs; ++w) {
      workers.emplace_back([&] {
        SubsetSearch search(problem, shared);
        for (std::uint64_t task = next++; task < tasks; task = next++) search.run(task, split);
      });
    }
  }

  SolveResult result;
  const Incumbent& best = shared.best;
  const bool seed_wins =
      seed_cost && (!best.found || scaled_money(best.cost, problem.money_scale) > *seed_cost);
  if (seed_wins) {
    result = finish(instance, *options.incumbent_seed);
    result.from_seed = true;
  } else {
    if (!best.found) {
      if (shared.timed_out) throw TimeLimitExceeded("time limit reached before any feasible plan was found");
      throw InfeasibleInstance("no combination of catalog quantities covers the demand");
    }
    ProcurementPlan plan = empty_plan(instance);
    for (std::size_t j = 0; j < problem.ingredients; ++j) {
      for (std::size_t t = 0; t < T; ++t) plan(j, t) = catalog.at(j, t).quantity(best.entries[j * T + t]);
    }
    result = finish(instance, std::move(plan));
    if (result.costs.total != scaled_money(best.cost, problem.money_scale)) {
      throw std::logic_error("scaled search cost disagrees with plan evaluation");
    }
  }
  result.proven_optimal = !shared.timed_out;
  result.stats.subsets_examined = shared.examined;
  result.stats.subsets_pruned = shared.pruned;
  result.stats.memo_states = shared.states;
  result.stats.elapsed = Clock::now() - start;
  return result;
}

SolveResult solve(const ProblemInstance& instance, const SolveOptions& options) {
  check_solvable(instance);
  return solve(instance, CoqCatalog::build(instance, options.jobs), options);
}

namespace {

// Shared tie-break state for the two reference enumerations.
struct ReferenceBest {
  bool found = false;
  Money cost;
  std::size_t orders = 0;
  std::vector<Quantity> plan;  // ingredient-major

  void offer(const Money& c, std::size_t o, const std::vector<Quantity>& p) {
    bool better = !found || c < cost || (c == cost && (o < orders || (o == orders && p < plan)));
    if (!better) return;
    found = true;
    cost = c;
    orders = o;
    plan = p;
  }
};

SolveResult reference_result(const ProblemInstance& instance, const ReferenceBest& best, bool timed_out,
                             Clock::time_point start, std::uint64_t examined, std::uint64_t pruned,
                             std::uint64_t states) {
  if (!best.found) {
    if (timed_out) throw TimeLimitExceeded("time limit reached before any feasible plan was found");
    throw InfeasibleInstance("no feasible plan");
  }
  ProcurementPlan plan = empty_plan(instance);
  for (std::size_t j = 0; j < instance.num_ingredients(); ++j) {
    for (std::size_t t = 0; t < instance.periods(); ++t) plan(j, t) = best.plan[j * instance.periods() + t];
  }
  SolveResult result = finish(instance, std::move(plan));
  if (result.costs.total != best.cost) throw std::logic_error("reference cost disagrees with plan evaluation");
  result.proven_optimal = !timed_out;
  result.stats.subsets_examined = examined;
  result.stats.subsets_pruned = pruned;
  result.stats.memo_states = states;
  result.stats.elapsed = Clock::now() - start;
  return result;
}

std::optional<Clock::time_point> deadline_for(const SolveOptions& options, Clock::time_point start) {
  if (!options.time_limit) return std::nullopt;
  return start + std::chrono::duration_cast<Clock::duration>(*options.time_limit);
}

}  // namespace

SolveResult brute_force_solve(const ProblemInstance& instance, const CoqCatalog& catalog,
                              const SolveOptions& options) {
  const auto start = Clock::now();
  if (!catalog.built_from(instance)) throw std::invalid_argument("catalog was built from a different instance");
  if (catalog.combination_count() > options.brute_force_cap) {
    throw CapExceeded("catalog has " + std::to_string(catalog.combination_count()) +
                      " combinations, above the cap of " + std::to_string(options.brute_force_cap));
  }
  const std::size_t J = instance.num_ingredients();
  const std::size_t T = instance.periods();
  const auto deadline = deadline_for(options, start);

  ReferenceBest best;
  std::vector<Quantity> plan(J * T, Quantity(0));
  std::vector<Quantity> inventory(J, Quantity(0));
  std::uint64_t examined = 0;
  std::uint64_t pruned = 0;
  bool timed_out = false;

  // Cells in period-major order; inventory is checked as soon as a cell is set.
  auto visit = [&](auto&& self, std::size_t cell, Money cost, std::size_t orders, bool period_open) -> void {
    if (timed_out) return;
    if (deadline && (examined & 1023) == 0 && Clock::now() > *deadline) {
      timed_out = true;
      return;
    }
    if (cell == J * T) {
      ++examined;
      best.offer(cost, orders, plan);
      return;
    }
    const std::size_t t = cell / J;
    const std::size_t j = cell % J;
    const auto& ing = instance.ingredients[j];
    const Quantity demand = instance.ingredient_demand(j, t);
    const auto& set = catalog.at(j, t);
    const Quantity before = inventory[j];
    for (std::size_t k = 0; k < set.size(); ++k) {
      const Quantity& q = set.quantity(k);
      const Quantity after = before + q - demand;
      if (after < 0) {
        ++pruned;
        continue;
      }
      const bool open = (j == 0 ? false : period_open) || q > 0;
      Money next = cost + purchase_cost(ing, q) + ing.holding_cost * (after + demand / 2);
      std::size_t next_orders = orders;
      if (j + 1 == J && open) {
        next += instance.ordering_cost;
        ++next_orders;
      }
      plan[j * T + t] = q;
      inventory[j] = after;
      self(self, cell + 1, next, next_orders, open);
    }
    plan[j * T + t] = 0;
    inventory[j] = before;
  };
  visit(visit, 0, Money(0), 0, false);
  return reference_result(instance, best, timed_out, start, examined, pruned, examined);
}

SolveResult grid_solve(const ProblemInstance& instance, const Quantity& step, const SolveOptions& options) {
  const auto start = Clock::now();
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  check_solvable(instance);
  const std::size_t J = instance.num_ingredients();
  const std::size_t T = instance.periods();
  if (T >= 20) throw CapExceeded("grid search is limited to fewer than 20 periods");

  // Grid values per ingredient.
  std::vector<std::vector<Quantity>> grid(J);
  double work = 0;
  for (std::size_t j = 0; j < J; ++j) {
    const auto& ing = instance.ingredients[j];
    grid[j].push_back(0);
    mpz_class m;
    Rational ratio = ing.min_order() / step;
    mpz_cdiv_q(m.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
    const Quantity first_multiple = step * Rational(m);
    for (Quantity q = first_multiple; q <= ing.capacity; q += step) grid[j].push_back(q);
    const double states = Rational(T * ing.capacity / step).get_d() + 1;
    work += static_cast<double>(T) * static_cast<double>(grid[j].size()) * states;
  }
  work *= static_cast<double>(std::uint64_t{1} << T);
  if (work > static_cast<double>(options.brute_force_cap) * 1000.0) {
    throw CapExceeded("grid search would need about " + format_significant(Rational(work), 3) + " steps");
  }
  const auto deadline = deadline_for(options, start);

  struct State {
    Money cost;
    std::vector<Quantity> prefix;
  };
  ReferenceBest best;
  std::uint64_t examined = 0;
  std::uint64_t pruned = 0;
  std::uint64_t states = 0;
  bool timed_out = false;

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << T) && !timed_out; ++mask) {
    if (deadline && Clock::now() > *deadline) {
      timed_out = true;
      break;
    }
    Money total = 0;
    std::vector<Quantity> plan;
    bool feasible = true;
    for (std::size_t j = 0; j < J && feasible; ++j) {
      const auto& ing = instance.ingredients[j];
      std::map<Quantity, State> layer{{Quantity(0), State{Money(0), {}}}};
      for (std::size_t t = 0; t < T; ++t) {
        const Quantity demand = instance.ingredient_demand(j, t);
        const bool open = (mask >> t) & 1u;
        std::map<Quantity, State> next;
        for (const auto& [inv, st] : layer) {
          for (const auto& q : grid[j]) {
            if (!open && q > 0) break;
            const Quantity after = inv + q - demand;
            if (after < 0) continue;
            Money c = st.cost + purchase_cost(ing, q) + ing.holding_cost * (after + demand / 2);
            auto it = next.find(after);
            if (it != next.end()) {
              if (it->second.cost < c) continue;
              std::vector<Quantity> prefix = st.prefix;
              prefix.push_back(q);
              if (it->second.cost == c && !(prefix < it->second.prefix)) continue;
              it->second = State{c, std::move(prefix)};
            } else {
              std::vector<Quantity> prefix = st.prefix;
              prefix.push_back(q);
              next.emplace(after, State{c, std::move(prefix)});
            }
          }
        }
        states += next.size();
        layer = std::move(next);
        if (layer.empty()) break;
      }
      if (layer.empty()) {
        feasible = false;
        break;
      }
      const State* pick = nullptr;
      for (const auto& [inv, st] : layer) {
        if (!pick || st.cost < pick->cost || (st.cost == pick->cost && st.prefix < pick->prefix)) pick = &st;
      }
      total += pick->cost;
      plan.insert(plan.end(), pick->prefix.begin(), pick->prefix.end());
    }
    if (!feasible) {
      ++pruned;
      continue;
    }
    ++examined;
    std::size_t orders = 0;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t j = 0; j < J; ++j) {
        if (plan[j * T + t] > 0) {
          ++orders;
          break;
        }
      }
    }
    total += instance.ordering_cost * orders;
    best.offer(total, orders, plan);
  }
  return reference_result(instance, best, timed_out, start, examined, pruned, states);
}

}  // namespace coqplan
