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

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coqplan {

// Every quantity and amount of money in the library is an exact rational.
using Rational = mpq_class;
using Quantity = Rational;
using Money = Rational;

class RationalFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "p/q", integers and decimal literals with an optional exponent
// ("12.5", "-3", "1.2e3"). No binary floating point is involved.
Rational parse_rational(std::string_view text);

// True when the value has a finite decimal expansion (denominator 2^a 5^b).
bool is_terminating(const Rational& value);

// Decimal when terminating, otherwise "p/q".
std::string format_exact(const Rational& value);

// Decimal when terminating, otherwise "p/q (~d.dddddd)".
std::string format_money(const Rational& value);

// Rounds to `digits` significant digits; used only where an approximate
// rendering is explicitly allowed.
std::string format_significant(const Rational& value, int digits);

Rational make_rational(long numerator, long denominator = 1);

// Lowest common multiple of the denominators of `values`.
mpz_class denominator_lcm(const std::vector<Rational>& values);

// Sorted, duplicate-free set of quantities.
using QuantitySet = std::vector<Quantity>;

void normalize(QuantitySet& set);
bool contains(const QuantitySet& set, const Quantity& value);

}  // namespace coqplan
