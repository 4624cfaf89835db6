// Copyright 2026 The simbridge Authors
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

#ifndef SIMBRIDGE_JSON_READER_HPP_
#define SIMBRIDGE_JSON_READER_HPP_

// Schema-checking reader over nlohmann::json used by the document loaders.
// Problems are collected with their JSON path instead of thrown one at a time
// so a user sees every mistake in a file at once.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace simbridge {

class JsonReader {
 public:
  using Json = nlohmann::json;

  explicit JsonReader(bool lenient = false) : lenient_(lenient) {}

  class Scope {
   public:
    Scope(JsonReader& r, std::string segment) : r_(r) { r_.path_.push_back(std::move(segment)); }
    ~Scope() { r_.path_.pop_back(); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    JsonReader& r_;
  };

  Scope scope(std::string segment) { return Scope(*this, std::move(segment)); }

  void fail(std::string_view key, const std::string& message) {
    errors_.push_back(where(key) + ": " + message);
  }

  bool check_object(const Json& j) {
    if (j.is_object()) return true;
    errors_.push_back(where({}) + ": expected an object");
    return false;
  }

  void expect_keys(const Json& obj, std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
      bool known = false;
      for (auto k : allowed) known = known || item.key() == k;
      if (known) continue;
      if (lenient_) {
        warnings_.push_back(where(item.key()) + ": unknown key ignored");
      } else {
        errors_.push_back(where(item.key()) + ": unknown key");
      }
    }
  }

  const Json* field(const Json& obj, std::string_view key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(key, "missing required key");
      return nullptr;
    }
    return &*it;
  }

  std::string required_string(const Json& obj, std::string_view key) {
    return string_or(obj, key, std::string(), true);
  }
  std::string optional_string(const Json& obj, std::string_view key, std::string fallback) {
    return string_or(obj, key, std::move(fallback), false);
  }

  double required_number(const Json& obj, std::string_view key) {
    return number_or(obj, key, 0.0, true);
  }
  double optional_number(const Json& obj, std::string_view key, double fallback) {
    return number_or(obj, key, fallback, false);
  }

  std::int64_t optional_int(const Json& obj, std::string_view key, std::int64_t fallback) {
    const Json* v = field(obj, key, false);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) {
      fail(key, "expected an integer");
      return fallback;
    }
    return v->get<std::int64_t>();
  }

  bool optional_bool(const Json& obj, std::string_view key, bool fallback) {
    const Json* v = field(obj, key, false);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) {
      fail(key, "expected a boolean");
      return fallback;
    }
    return v->get<bool>();
  }

  bool ok() const { return errors_.empty(); }
  std::vector<std::string> take_errors() { return std::exchange(errors_, {}); }
  std::vector<std::string> take_warnings() { return std::exchange(warnings_, {}); }

 private:
  std::string where(std::string_view key) const {
    std::string out;
    for (const auto& p : path_) {
      if (!out.empty()) out += '.';
      out += p;
    }
    if (!key.empty()) {
      if (!out.empty()) out += '.';
      out += key;
    }
    return out.empty() ? std::string("document") : out;
  }

  std::string string_or(const Json& obj, std::string_view key, std::string fallback, bool required) {
    const Json* v = field(obj, key, required);
    if (v == nullptr) return fallback;
    if (!v->is_string()) {
      fail(key, "expected a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  double number_or(const Json& obj, std::string_view key, double fallback, bool required) {
    const Json* v = field(obj, key, required);
    if (v == nullptr) return fallback;
    if (!v->is_number()) {
      fail(key, "expected a number");
      return fallback;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      fail(key, "number is not finite");
      return fallback;
    }
    return x;
  }

  bool lenient_;
  std::vector<std::string> path_;
  std::vector<std::string> errors_;
  std::vector<std::string> warnings_;
};

}  // namespace simbridge

#endif  // SIMBRIDGE_JSON_READER_HPP_
