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

// JSON reading that never routes a number through binary floating point.
// Non-integer number tokens are kept as their source text (stored as JSON
// strings tagged in `raw_numbers`) and converted with parse_rational.

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coqplan/instance.hpp"
#include "coqplan/rational.hpp"

namespace coqplan::detail {

using Json = nlohmann::ordered_json;

// Parses `text` into a DOM. Float tokens become strings holding the raw
// token. Duplicate keys and syntax errors raise ParseError with line/column.
Json parse_exact_json(std::string_view text);

// Converts an integer, raw-decimal or "p/q" string node. `where` names the
// field for error messages.
Rational json_rational(const Json& node, const std::string& where);

// True for a genuine JSON string (not a captured number token).
bool is_plain_string(const Json& node);

const Json& require_field(const Json& object, const char* key, const std::string& where);

// Throws SemanticError when `object` has keys outside `allowed`.
void reject_unknown_fields(const Json& object, const std::set<std::string>& allowed,
                           const std::string& where);

// Appends a rational as a JSON token: number when terminating, "p/q" string
// otherwise.
void append_rational(std::string& out, const Rational& value);

// JSON string literal with escaping.
void append_string(std::string& out, std::string_view value);

}  // namespace coqplan::detail
