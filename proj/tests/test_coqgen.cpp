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

#include <algorithm>
#include <random>

#include "coqplan/coqgen.hpp"
#include "test_support.hpp"

using namespace coqplan;

namespace {

QuantitySet q(std::initializer_list<long> values) {
  QuantitySet out;
  for (long v : values) out.push_back(Quantity(v));
  return out;
}

}  // namespace

TEST_CASE("thresholds of the base instance") {
  const ProblemInstance inst = base_instance();
  CHECK(threshold_quantities(inst, 0) == q({1, 1020, 1200, 2400, 2500, 5000}));
  const QuantitySet raw = raw_threshold_quantities(inst, 0);
  CHECK(contains(raw, make_rational(3, 5)));
  CHECK(contains(raw, Quantity(6000)));
  const QuantitySet j2 = threshold_quantities(inst, 1);
  CHECK(contains(j2, Quantity(1700)));
  CHECK(contains(j2, Quantity(4000)));
  CHECK(contains(j2, Quantity(2000)));
}

TEST_CASE("single ingredient keeps only its own thresholds") {
  const ProblemInstance inst = testing::toy_instance();
  CHECK(raw_threshold_quantities(inst, 0) == q({1, 100}));
}

TEST_CASE("aggregates and prefixes") {
  const ProblemInstance inst = base_instance();
  CHECK(aggregate_quantities(inst, 0, 2) == q({621, 1311, 1881, 2589}));
  const QuantitySet first = aggregate_quantities(inst, 0, 0);
  for (long v : {480, 984, 3573}) CHECK(contains(first, Quantity(v)));
  const std::size_t last = inst.periods() - 1;
  CHECK(aggregate_quantities(inst, 1, last).size() == 1);
  CHECK(contains(prefix_aggregates(inst, 1, 2), Quantity(2675)));
  CHECK(prefix_aggregates(inst, 1, 0).size() == 1);

  ProblemInstance zero = testing::toy_instance();
  zero.demands = {Rational(0), Rational(0)};
  CHECK(prefix_aggregates(zero, 0, 1) == q({0}));
}

TEST_CASE("residuals of the base instance") {
  const ProblemInstance inst = base_instance();
  CHECK(contains(residual_shortfalls(inst, 1, 2), Quantity(975)));
  CHECK(contains(residual_quantities(inst, 1, 2), Quantity(4255)));
  for (const Quantity& v : residual_quantities(inst, 1, 2)) CHECK(v <= inst.ingredients[1].capacity);
}

TEST_CASE("zero demand period has no residuals") {
  ProblemInstance inst = testing::toy_instance();
  inst.demands = {Rational(3), Rational(0)};
  CHECK(residual_shortfalls(inst, 0, 1).empty());
}

TEST_CASE("first period shortfalls stay below its demand") {
  const ProblemInstance inst = base_instance();
  for (std::size_t j = 0; j < 2; ++j) {
    for (const Quantity& v : residual_shortfalls(inst, j, 0)) {
      CHECK(v > 0);
      CHECK(v < inst.ingredient_demand(j, 0));
    }
  }
}

TEST_CASE("coq sets: zero first, strictly increasing, filtered") {
  const ProblemInstance inst = base_instance();
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t t = 0; t < inst.periods(); ++t) {
      const CoqSet set = coq_set(inst, j, t);
      REQUIRE(set.size() > 0);
      CHECK(set.quantity(0) == 0);
      CHECK(set.entries[0].provenance.has(CoqTag::kZero));
      for (std::size_t k = 1; k < set.size(); ++k) {
        CHECK(set.quantity(k - 1) < set.quantity(k));
        CHECK(set.quantity(k) >= inst.ingredients[j].min_order());
        CHECK(set.quantity(k) <= inst.ingredients[j].capacity);
      }
    }
  }
  const CoqSet j2t1 = coq_set(inst, 1, 0);
  CHECK(j2t1.contains(Quantity(1700)));
  CHECK(j2t1.contains(Quantity(4000)));
  const CoqSet j1t3 = coq_set(inst, 0, 2);
  CHECK(j1t3.contains(Quantity(2589)));
  CHECK(j1t3.contains(Quantity(621)));
  CHECK(j1t3.index_of(Quantity(7)) == CoqSet::npos);
}

TEST_CASE("base catalog sizes") {
  const CoqCatalog cat = CoqCatalog::build(base_instance());
  const std::vector<std::size_t> j1 = {25, 22, 31, 25, 21, 16};
  const std::vector<std::size_t> j2 = {27, 24, 33, 27, 23, 18};
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(cat.at(0, t).size() == j1[t]);
    CHECK(cat.at(1, t).size() == j2[t]);
  }
}

TEST_CASE("provenance merges tags") {
  const CoqSet set = coq_set(base_instance(), 1, 2);
  const std::size_t k = set.index_of(Quantity(4255));
  REQUIRE(k != CoqSet::npos);
  CHECK(set.entries[k].provenance.has(CoqTag::kResidual));
  // 1200 is both an own threshold and a scaled one.
  const CoqSet j1 = coq_set(base_instance(), 0, 0);
  const std::size_t m = j1.index_of(Quantity(1200));
  REQUIRE(m != CoqSet::npos);
  CHECK(j1.entries[m].provenance.has(CoqTag::kThreshold));
  CHECK(j1.entries[m].provenance.details.size() >= 1);
  CHECK(j1.entries[m].provenance.tag_names().find("Threshold") != std::string::npos);
}

TEST_CASE("size bounds") {
  const ProblemInstance inst = base_instance();
  const SizeBounds b = size_bounds(inst, 0);
  CHECK(b.threshold == 8);
  CHECK(b.aggregate == 21);
  CHECK(b.residual == 200);

  const CoqCatalog cat = CoqCatalog::build(inst);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(cat.raw_thresholds(j).size() <= b.threshold);
    QuantitySet agg;
    QuantitySet res;
    for (std::size_t t = 0; t < inst.periods(); ++t) {
      const auto& a = cat.aggregates(j, t);
      const auto& r = cat.raw_residuals(j, t);
      agg.insert(agg.end(), a.begin(), a.end());
      res.insert(res.end(), r.begin(), r.end());
    }
    normalize(agg);
    normalize(res);
    CHECK(agg.size() <= b.aggregate);
    CHECK(res.size() <= b.residual);
  }

  ProblemInstance one = testing::toy_instance();
  one.demands = {Rational(3)};
  CHECK(size_bounds(one, 0).aggregate == 1);
  CHECK(size_bounds(one, 0).residual == 0);
}

TEST_CASE("residual bound forms agree") {
  for (std::uint64_t T = 1; T <= 30; ++T) {
    for (std::uint64_t B : {1u, 8u, 13u}) {
      CHECK(residual_bound_summed(B, T) == residual_bound_binomial(B, T));
      CHECK(residual_bound_polynomial(B, T) == residual_bound_binomial(B, T));
    }
  }
  CHECK(residual_bound_binomial(1, 3) == 3);
}

// With one period the residual bound is zero, yet a threshold below the
// first demand still leaves a shortfall. The bound is kept as written.
TEST_CASE("single period residual set can exceed its bound") {
  ProblemInstance inst = testing::toy_instance();
  inst.demands = {Rational(3)};
  CHECK(raw_residual_quantities(inst, 0, 0) == q({2}));
  CHECK(size_bounds(inst, 0).residual == 0);
}

TEST_CASE("parallel build is identical") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const ProblemInstance inst = testing::random_small_instance(rng, 3, 6, 3, 80);
    const CoqCatalog a = CoqCatalog::build(inst, 1);
    const CoqCatalog b = CoqCatalog::build(inst, 4);
    CHECK(a.total_entries() == b.total_entries());
    for (std::size_t j = 0; j < inst.num_ingredients(); ++j) {
      for (std::size_t t = 0; t < inst.periods(); ++t) {
        const auto& x = a.at(j, t);
        const auto& y = b.at(j, t);
        REQUIRE(x.size() == y.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
          CHECK(x.quantity(k) == y.quantity(k));
          CHECK(x.entries[k].provenance.tags == y.entries[k].provenance.tags);
        }
      }
    }
  }
}

TEST_CASE("permuting ingredients relabels the catalog") {
  ProblemInstance inst = base_instance();
  ProblemInstance swapped = inst;
  std::swap(swapped.ingredients[0], swapped.ingredients[1]);
  const CoqCatalog a = CoqCatalog::build(inst);
  const CoqCatalog b = CoqCatalog::build(swapped);
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& x = a.at(j, t);
      const auto& y = b.at(1 - j, t);
      REQUIRE(x.size() == y.size());
      for (std::size_t k = 0; k < x.size(); ++k) CHECK(x.quantity(k) == y.quantity(k));
    }
  }
}
