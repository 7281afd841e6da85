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

#include "exact_json.hpp"

#include <utility>

namespace coqplan::detail {
namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

class DomBuilder {
 public:
  using number_integer_t = Json::number_integer_t;
  using number_unsigned_t = Json::number_unsigned_t;
  using number_float_t = Json::number_float_t;
  using string_t = Json::string_t;
  using binary_t = Json::binary_t;

  explicit DomBuilder(std::string_view text) : text_(text) {}

  bool null() { return put(Json(nullptr)); }
  bool boolean(bool v) { return put(Json(v)); }
  bool number_integer(number_integer_t v) { return put(Json(v)); }
  bool number_unsigned(number_unsigned_t v) { return put(Json(v)); }
  bool number_float(number_float_t, const string_t& raw) {
    // Tagged so json_rational accepts decimals here but the field still
    // reads as a number in error messages.
    return put(Json(std::string(kRawPrefix) + raw));
  }
  bool string(string_t& v) { return put(Json(v)); }
  bool binary(binary_t&) { return put(Json(nullptr)); }

  bool start_object(std::size_t) {
    Json* node = put_container(Json::object());
    stack_.push_back(node);
    keys_.emplace_back();
    return true;
  }
  bool key(string_t& k) {
    if (!keys_.back().insert(k).second) {
      duplicate_ = k;
      return false;
    }
    pending_key_ = k;
    return true;
  }
  bool end_object() {
    stack_.pop_back();
    keys_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    Json* node = put_container(Json::array());
    stack_.push_back(node);
    keys_.emplace_back();
    return true;
  }
  bool end_array() {
    stack_.pop_back();
    keys_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::json::exception& ex) {
    error_position_ = position;
    error_message_ = ex.what();
    return false;
  }

  Json take() { return std::move(root_); }
  const std::string& duplicate() const { return duplicate_; }
  std::size_t error_position() const { return error_position_; }
  const std::string& error_message() const { return error_message_; }

  static constexpr std::string_view kRawPrefix = "\x01num:";

 private:
  bool put(Json value) {
    put_container(std::move(value));
    return true;
  }
  Json* put_container(Json value) {
    if (stack_.empty()) {
      root_ = std::move(value);
      return &root_;
    }
    Json& parent = *stack_.back();
    if (parent.is_array()) {
      parent.push_back(std::move(value));
      return &parent.back();
    }
    parent[pending_key_] = std::move(value);
    return &parent[pending_key_];
  }

  std::string_view text_;
  Json root_;
  std::vector<Json*> stack_;
  std::vector<std::set<std::string>> keys_;
  std::string pending_key_;
  std::string duplicate_;
  std::size_t error_position_ = 0;
  std::string error_message_;
};

}  // namespace

Json parse_exact_json(std::string_view text) {
  DomBuilder builder(text);
  bool ok = Json::sax_parse(text.begin(), text.end(), &builder);
  if (!ok) {
    if (!builder.duplicate().empty()) {
      throw SemanticError("duplicate key '" + builder.duplicate() + "'");
    }
    auto [line, column] = line_column(text, builder.error_position() == 0 ? 0 : builder.error_position() - 1);
    // Drop the library's "[json.exception...] parse error at line L, column C: " prefix.
    std::string message = builder.error_message();
    if (auto colon = message.find(": "); message.rfind("[json.exception", 0) == 0 && colon != std::string::npos) {
      message.erase(0, colon + 2);
    }
    throw ParseError(line, column, message);
  }
  return builder.take();
}

Rational json_rational(const Json& node, const std::string& where) {
  try {
    if (node.is_number_unsigned()) return Rational(mpz_class(std::to_string(node.get<std::uint64_t>()), 10));
    if (node.is_number_integer()) return Rational(mpz_class(std::to_string(node.get<std::int64_t>()), 10));
    if (node.is_string()) {
      std::string s = node.get<std::string>();
      if (s.starts_with(DomBuilder::kRawPrefix)) {
        return parse_rational(std::string_view(s).substr(DomBuilder::kRawPrefix.size()));
      }
      return parse_rational(s);
    }
  } catch (const RationalFormatError& e) {
    throw SemanticError(where + ": " + e.what());
  }
  throw SemanticError(where + ": expected a number or a \"p/q\" string");
}

bool is_plain_string(const Json& node) {
  return node.is_string() && !node.get_ref<const std::string&>().starts_with(DomBuilder::kRawPrefix);
}

const Json& require_field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) throw SemanticError(where + ": expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw SemanticError(where + ": missing field '" + key + "'");
  return *it;
}

void reject_unknown_fields(const Json& object, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!object.is_object()) throw SemanticError(where + ": expected an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) throw SemanticError(where + ": unknown field '" + key + "'");
  }
}

void append_rational(std::string& out, const Rational& value) {
  if (is_terminating(value)) {
    out += format_exact(value);
  } else {
    out += '"';
    out += value.get_str();
    out += '"';
  }
}

void append_string(std::string& out, std::string_view value) {
  out += nlohmann::json(std::string(value)).dump();
}

}  // namespace coqplan::detail
