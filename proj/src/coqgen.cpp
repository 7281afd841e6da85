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

#include "coqplan/coqgen.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <thread>

namespace coqplan {
namespace {

struct Candidate {
  Quantity quantity;
  CoqTag tag;
  std::string detail;
};

std::string period_range(std::size_t first, std::size_t last) {
  if (first == last) return "period " + std::to_string(first + 1);
  return "periods " + std::to_string(first + 1) + ".." + std::to_string(last + 1);
}

std::vector<Candidate> threshold_candidates(const ProblemInstance& instance, std::size_t j) {
  std::vector<Candidate> out;
  const auto& own = instance.ingredients[j];
  for (std::size_t n = 0; n < own.levels.size(); ++n) {
    out.push_back({own.levels[n].min_qty, CoqTag::kThreshold, "level " + std::to_string(n + 1) + " lower bound"});
  }
  out.push_back({own.capacity, CoqTag::kThreshold, "capacity"});
  for (std::size_t other = 0; other < instance.num_ingredients(); ++other) {
    if (other == j) continue;
    const auto& ing = instance.ingredients[other];
    Rational ratio = own.alpha / ing.alpha;
    for (std::size_t n = 0; n < ing.levels.size(); ++n) {
      out.push_back({ratio * ing.levels[n].min_qty, CoqTag::kThreshold,
                     "scaled from " + ing.id + " level " + std::to_string(n + 1)});
    }
    out.push_back({ratio * ing.capacity, CoqTag::kThreshold, "scaled from " + ing.id + " capacity"});
  }
  return out;
}

std::vector<Candidate> aggregate_candidates(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  std::vector<Candidate> out;
  const Rational& alpha = instance.ingredients[j].alpha;
  Rational sum = 0;
  for (std::size_t last = t; last < instance.periods(); ++last) {
    sum += instance.demands[last];
    out.push_back({alpha * sum, CoqTag::kAggregate, "demand of " + period_range(t, last)});
  }
  return out;
}

std::vector<Candidate> residual_candidates(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  const Rational& alpha = instance.ingredients[j].alpha;
  const Quantity period_demand = instance.ingredient_demand(j, t);
  const auto thresholds = threshold_candidates(instance, j);

  // Shortfalls, keyed by value so each is extended once.
  std::map<Quantity, std::string> shortfalls;
  Rational prefix = 0;
  for (std::size_t first = t + 1; first-- > 0;) {
    prefix += instance.demands[first];
    const Quantity b = alpha * prefix;
    for (const auto& c : thresholds) {
      Quantity diff = b - c.quantity;
      if (diff > 0 && diff < period_demand) {
        shortfalls.try_emplace(diff, "demand of " + period_range(first, t) + " minus " + format_exact(c.quantity) +
                                         " (" + c.detail + ")");
      }
    }
  }

  std::vector<Candidate> out;
  for (const auto& [s, note] : shortfalls) out.push_back({s, CoqTag::kResidual, note});
  if (t + 1 < instance.periods()) {
    auto extensions = aggregate_candidates(instance, j, t + 1);
    for (const auto& [s, note] : shortfalls) {
      for (const auto& g : extensions) {
        out.push_back({s + g.quantity, CoqTag::kResidual, note + " plus " + g.detail});
      }
    }
  }
  return out;
}

QuantitySet values(const std::vector<Candidate>& candidates) {
  QuantitySet out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.quantity);
  normalize(out);
  return out;
}

QuantitySet within(QuantitySet set, const Quantity& lo, const Quantity& hi) {
  std::erase_if(set, [&](const Quantity& q) { return q < lo || q > hi; });
  return set;
}

std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

std::string CoqProvenance::tag_names() const {
  std::string out;
  auto add = [&](CoqTag tag, const char* name) {
    if (!has(tag)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(CoqTag::kZero, "Zero");
  add(CoqTag::kThreshold, "Threshold");
  add(CoqTag::kAggregate, "Aggregate");
  add(CoqTag::kResidual, "Residual");
  return out;
}

std::string CoqProvenance::detail_text() const {
  std::string out;
  for (const auto& d : details) {
    if (!out.empty()) out += "; ";
    out += d;
  }
  return out;
}

std::size_t CoqSet::index_of(const Quantity& q) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), q,
                             [](const CoqEntry& e, const Quantity& v) { return e.quantity < v; });
  if (it == entries.end() || it->quantity != q) return npos;
  return static_cast<std::size_t>(it - entries.begin());
}

QuantitySet raw_threshold_quantities(const ProblemInstance& instance, std::size_t j) {
  return values(threshold_candidates(instance, j));
}

QuantitySet threshold_quantities(const ProblemInstance& instance, std::size_t j) {
  const auto& ing = instance.ingredients[j];
  return within(raw_threshold_quantities(instance, j), ing.min_order(), ing.capacity);
}

QuantitySet aggregate_quantities(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  return values(aggregate_candidates(instance, j, t));
}

QuantitySet prefix_aggregates(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  QuantitySet out;
  Rational sum = 0;
  for (std::size_t first = t + 1; first-- > 0;) {
    sum += instance.demands[first];
    out.push_back(instance.ingredients[j].alpha * sum);
  }
  normalize(out);
  return out;
}

QuantitySet residual_shortfalls(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  QuantitySet out;
  const Quantity period_demand = instance.ingredient_demand(j, t);
  const auto thresholds = raw_threshold_quantities(instance, j);
  for (const auto& b : prefix_aggregates(instance, j, t)) {
    for (const auto& c : thresholds) {
      Quantity diff = b - c;
      if (diff > 0 && diff < period_demand) out.push_back(diff);
    }
  }
  normalize(out);
  return out;
}

QuantitySet raw_residual_quantities(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  return values(residual_candidates(instance, j, t));
}

QuantitySet residual_quantities(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  QuantitySet out = raw_residual_quantities(instance, j, t);
  std::erase_if(out, [&](const Quantity& q) { return q > instance.ingredients[j].capacity; });
  return out;
}

CoqSet coq_set(const ProblemInstance& instance, std::size_t j, std::size_t t) {
  const auto& ing = instance.ingredients[j];
  std::vector<Candidate> all = threshold_candidates(instance, j);
  for (auto& c : aggregate_candidates(instance, j, t)) all.push_back(std::move(c));
  for (auto& c : residual_candidates(instance, j, t)) all.push_back(std::move(c));

  // Keyed merge keeps the union of tags and notes for equal quantities.
  std::map<Quantity, CoqProvenance> merged;
  merged[Quantity(0)] = CoqProvenance{static_cast<unsigned>(CoqTag::kZero), {"no order"}};
  for (auto& c : all) {
    if (c.quantity < ing.min_order() || c.quantity > ing.capacity) continue;
    auto& prov = merged[c.quantity];
    prov.tags |= static_cast<unsigned>(c.tag);
    if (std::find(prov.details.begin(), prov.details.end(), c.detail) == prov.details.end()) {
      prov.details.push_back(std::move(c.detail));
    }
  }

  CoqSet set;
  set.ingredient = j;
  set.period = t;
  set.entries.reserve(merged.size());
  for (auto& [q, prov] : merged) set.entries.push_back({q, std::move(prov)});
  return set;
}

std::uint64_t residual_bound_binomial(std::uint64_t threshold_bound, std::uint64_t periods) {
  if (periods == 0) return 0;
  return threshold_bound * ((periods - 1) + choose3(periods));
}

std::uint64_t residual_bound_summed(std::uint64_t threshold_bound, std::uint64_t periods) {
  if (periods == 0) return 0;
  std::uint64_t sum = 0;
  for (std::uint64_t t = 1; t + 1 <= periods; ++t) sum += threshold_bound * (t - 1) * (periods - t);
  return sum + (periods - 1) * threshold_bound;
}

std::uint64_t residual_bound_polynomial(std::uint64_t threshold_bound, std::uint64_t periods) {
  if (periods == 0) return 0;
  return threshold_bound * (periods - 1) * (periods * periods - 2 * periods + 6) / 6;
}

SizeBounds size_bounds(const ProblemInstance& instance, std::size_t /*j*/) {
  SizeBounds b;
  b.threshold = instance.num_ingredients();
  for (const auto& ing : instance.ingredients) b.threshold += ing.levels.size();
  const std::uint64_t periods = instance.periods();
  b.aggregate = periods * (periods + 1) / 2;
  b.residual = residual_bound_binomial(b.threshold, periods);
  return b;
}

CoqCatalog CoqCatalog::build(const ProblemInstance& instance, unsigned jobs) {
  CoqCatalog cat;
  cat.source_ = instance;
  cat.ingredients_ = instance.num_ingredients();
  cat.periods_ = instance.periods();
  const std::size_t cells = cat.ingredients_ * cat.periods_;
  cat.sets_.resize(cells);
  cat.aggregates_.resize(cells);
  cat.prefixes_.resize(cells);
  cat.shortfalls_.resize(cells);
  cat.raw_residuals_.resize(cells);
  for (std::size_t j = 0; j < cat.ingredients_; ++j) {
    cat.raw_thresholds_.push_back(raw_threshold_quantities(instance, j));
  }

  auto build_cell = [&](std::size_t cell) {
    const std::size_t j = cell / cat.periods_;
    const std::size_t t = cell % cat.periods_;
    cat.sets_[cell] = coq_set(instance, j, t);
    cat.aggregates_[cell] = aggregate_quantities(instance, j, t);
    cat.prefixes_[cell] = prefix_aggregates(instance, j, t);
    cat.shortfalls_[cell] = residual_shortfalls(instance, j, t);
    cat.raw_residuals_[cell] = raw_residual_quantities(instance, j, t);
  };

  if (jobs <= 1 || cells <= 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) build_cell(cell);
  } else {
    // Each cell writes only its own slot.
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, cells); ++w) {
      workers.emplace_back([&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) build_cell(cell);
      });
    }
  }
  return cat;
}

std::uint64_t CoqCatalog::combination_count() const {
  std::uint64_t product = 1;
  for (const auto& s : sets_) product = saturating_mul(product, s.size());
  return product;
}

std::size_t CoqCatalog::total_entries() const {
  std::size_t total = 0;
  for (const auto& s : sets_) total += s.size();
  return total;
}

}  // namespace coqplan
