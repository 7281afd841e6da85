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

#include "coqplan/rational.hpp"

#include <algorithm>
#include <cctype>

namespace coqplan {
namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

mpz_class pow10(unsigned long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw RationalFormatError("malformed exponent in '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    body = body.substr(0, e);
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw RationalFormatError("malformed decimal '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(body)) {
      throw RationalFormatError("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(body);
  }
  Rational value{mpz_class(digits, 10)};
  if (exponent > 0) value *= pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) value /= pow10(static_cast<unsigned long>(-exponent));
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw RationalFormatError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) {
      throw RationalFormatError("malformed fraction '" + std::string(text) + "'");
    }
    mpz_class d(std::string(den), 10);
    if (d == 0) throw RationalFormatError("zero denominator in '" + std::string(text) + "'");
    Rational value(mpz_class(std::string(num), 10), d);
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }
  return parse_decimal(text);
}

bool is_terminating(const Rational& value) {
  mpz_class den = value.get_den();
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) den /= 2;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) den /= 5;
  return den == 1;
}

std::string format_exact(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  if (!is_terminating(value)) return value.get_str();
  // Smallest k with den | 10^k.
  unsigned long k = 0;
  mpz_class scale = 1;
  while (!mpz_divisible_p(scale.get_mpz_t(), value.get_den().get_mpz_t())) {
    scale *= 10;
    ++k;
  }
  mpz_class scaled = abs(value.get_num()) * (scale / value.get_den());
  std::string digits = scaled.get_str();
  if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
  digits.insert(digits.size() - k, ".");
  return (sgn(value) < 0 ? "-" : "") + digits;
}

std::string format_significant(const Rational& value, int digits) {
  if (value == 0) return "0";
  mpf_class approx(value, 256);
  mp_exp_t exp = 0;
  std::string mantissa = approx.get_str(exp, 10, static_cast<size_t>(digits));
  bool negative = !mantissa.empty() && mantissa.front() == '-';
  if (negative) mantissa.erase(0, 1);
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<size_t>(-exp), '0') + mantissa;
  } else if (static_cast<size_t>(exp) >= mantissa.size()) {
    out = mantissa + std::string(static_cast<size_t>(exp) - mantissa.size(), '0');
  } else {
    out = mantissa.substr(0, static_cast<size_t>(exp)) + "." + mantissa.substr(static_cast<size_t>(exp));
  }
  return (negative ? "-" : "") + out;
}

std::string format_money(const Rational& value) {
  if (is_terminating(value)) return format_exact(value);
  return value.get_str() + " (~" + format_significant(value, 10) + ")";
}

Rational make_rational(long numerator, long denominator) {
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

mpz_class denominator_lcm(const std::vector<Rational>& values) {
  mpz_class acc = 1;
  for (const auto& v : values) {
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.get_den_mpz_t());
  }
  return acc;
}

void normalize(QuantitySet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

bool contains(const QuantitySet& set, const Quantity& value) {
  return std::binary_search(set.begin(), set.end(), value);
}

}  // namespace coqplan
