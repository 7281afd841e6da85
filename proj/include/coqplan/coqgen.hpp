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

// Critical order quantities (COQs): a finite candidate set of order sizes
// per (ingredient, period), built from three sources:
//
//   * thresholds  - discount lower bounds and capacities, including those of
//                   other ingredients rescaled by the blending ratio;
//   * aggregates  - exact demand of periods t..t' for every t' >= t;
//   * residuals   - top-ups for inventory left over by a threshold-sized
//                   order, optionally extended by later aggregates.
//
// Zero is always a candidate. Non-zero candidates outside [l_{j,1}, u_j]
// cannot be ordered and are dropped from the final sets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coqplan/instance.hpp"
#include "coqplan/rational.hpp"

namespace coqplan {

enum class CoqTag : unsigned {
  kThreshold = 1u << 0,
  kAggregate = 1u << 1,
  kResidual = 1u << 2,
  kZero = 1u << 3,
};

struct CoqProvenance {
  unsigned tags = 0;                 // bitwise or of CoqTag
  std::vector<std::string> details;  // one derivation note per source

  bool has(CoqTag tag) const { return (tags & static_cast<unsigned>(tag)) != 0; }
  std::string tag_names() const;     // e.g. "Threshold|Residual"
  std::string detail_text() const;   // details joined with "; "
};

struct CoqEntry {
  Quantity quantity;
  CoqProvenance provenance;
};

// Ordered candidate set for one (ingredient, period). entries[0] is zero.
struct CoqSet {
  std::size_t ingredient = 0;
  std::size_t period = 0;
  std::vector<CoqEntry> entries;

  std::size_t size() const { return entries.size(); }
  const Quantity& quantity(std::size_t k) const { return entries[k].quantity; }
  // Index of `q` in entries, or npos.
  std::size_t index_of(const Quantity& q) const;
  bool contains(const Quantity& q) const { return index_of(q) != npos; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Filtered threshold candidates for ingredient j, within [l_{j,1}, u_j].
QuantitySet threshold_quantities(const ProblemInstance& instance, std::size_t j);
// All threshold candidates before filtering (may include values below the
// minimum order or above capacity).
QuantitySet raw_threshold_quantities(const ProblemInstance& instance, std::size_t j);

// alpha_j * {d_t + ... + d_t' : t' >= t}
QuantitySet aggregate_quantities(const ProblemInstance& instance, std::size_t j, std::size_t t);

// alpha_j * {d_s + ... + d_t : s <= t}
QuantitySet prefix_aggregates(const ProblemInstance& instance, std::size_t j, std::size_t t);

// Differences b - c with b a prefix aggregate ending at t and c a raw
// threshold candidate, kept when 0 < b - c < alpha_j * d_t.
QuantitySet residual_shortfalls(const ProblemInstance& instance, std::size_t j, std::size_t t);

// Shortfalls plus shortfalls extended by aggregates starting at t + 1, before
// the capacity filter.
QuantitySet raw_residual_quantities(const ProblemInstance& instance, std::size_t j, std::size_t t);

// raw_residual_quantities restricted to values <= u_j.
QuantitySet residual_quantities(const ProblemInstance& instance, std::size_t j, std::size_t t);

CoqSet coq_set(const ProblemInstance& instance, std::size_t j, std::size_t t);

struct SizeBounds {
  std::uint64_t threshold = 0;  // |J| + sum_j |N_j|
  std::uint64_t aggregate = 0;  // |T|(|T|+1)/2
  std::uint64_t residual = 0;   // threshold * ((|T|-1) + C(|T|,3))
};

SizeBounds size_bounds(const ProblemInstance& instance, std::size_t j);

// The residual bound in its summed form, sum_{t=1}^{T-1} B (t-1)(T-t) + (T-1) B,
// and in the closed polynomial form B (T-1)(T^2-2T+6)/6.
std::uint64_t residual_bound_summed(std::uint64_t threshold_bound, std::uint64_t periods);
std::uint64_t residual_bound_polynomial(std::uint64_t threshold_bound, std::uint64_t periods);
std::uint64_t residual_bound_binomial(std::uint64_t threshold_bound, std::uint64_t periods);

// Eagerly built candidate sets for every (ingredient, period) together with
// the intermediate sets they came from. Immutable once built.
class CoqCatalog {
 public:
  // `jobs` > 1 builds (j, t) pairs on worker threads; the result is
  // identical to the serial build.
  static CoqCatalog build(const ProblemInstance& instance, unsigned jobs = 1);

  std::size_t num_ingredients() const { return ingredients_; }
  std::size_t num_periods() const { return periods_; }

  const CoqSet& at(std::size_t j, std::size_t t) const { return sets_[j * periods_ + t]; }

  const QuantitySet& raw_thresholds(std::size_t j) const { return raw_thresholds_[j]; }
  const QuantitySet& aggregates(std::size_t j, std::size_t t) const { return aggregates_[j * periods_ + t]; }
  const QuantitySet& prefixes(std::size_t j, std::size_t t) const { return prefixes_[j * periods_ + t]; }
  const QuantitySet& shortfalls(std::size_t j, std::size_t t) const { return shortfalls_[j * periods_ + t]; }
  const QuantitySet& raw_residuals(std::size_t j, std::size_t t) const { return raw_residuals_[j * periods_ + t]; }

  // Product of all set sizes, saturating at UINT64_MAX.
  std::uint64_t combination_count() const;
  std::size_t total_entries() const;

  // Whether the catalog was built from `instance`.
  bool built_from(const ProblemInstance& instance) const { return source_ == instance; }

 private:
  ProblemInstance source_;
  std::size_t ingredients_ = 0;
  std::size_t periods_ = 0;
  std::vector<CoqSet> sets_;
  std::vector<QuantitySet> raw_thresholds_;
  std::vector<QuantitySet> aggregates_;
  std::vector<QuantitySet> prefixes_;
  std::vector<QuantitySet> shortfalls_;
  std::vector<QuantitySet> raw_residuals_;
};

}  // namespace coqplan
