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

#include "simbridge/datastore.hpp"

#include <algorithm>
#include <cctype>

namespace simbridge {

std::string_view to_string(ValueType type) {
  switch (type) {
    case ValueType::kNone: return "none";
    case ValueType::kBool: return "bool";
    case ValueType::kInt: return "int";
    case ValueType::kDouble: return "double";
    case ValueType::kString: return "string";
    case ValueType::kGains: return "gains";
    case ValueType::kFrame: return "frame";
  }
  return "?";
}

ValueType type_of(const Value& value) {
  return std::visit([](const auto& v) { return value_type_of<std::decay_t<decltype(v)>>(); },
                    value);
}

std::string to_string(const Signature& sig) {
  std::string out = "(";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(sig.params[i]);
  }
  out += ") -> ";
  out += to_string(sig.result);
  return out;
}

std::string gains_key(std::string_view joint) {
  std::string key = "servo.gains.";
  key += joint;
  return key;
}

void Datastore::check_key(std::string_view key) {
  const bool bad = key.empty() || std::any_of(key.begin(), key.end(), [](unsigned char c) {
                     return std::isspace(c) != 0;
                   });
  if (bad) {
    throw DatastoreError(DatastoreError::Kind::kInvalidKey,
                         "invalid datastore key \"" + std::string(key) + "\"");
  }
}

const Datastore::Entry& Datastore::require(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw DatastoreError(DatastoreError::Kind::kMissingKey,
                         "no datastore entry \"" + std::string(key) + "\"");
  }
  return it->second;
}

void Datastore::put(std::string_view key, Value value) {
  check_key(key);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    const Entry& existing = it->second;
    if (existing.callable) {
      throw DatastoreError(DatastoreError::Kind::kTypeMismatch,
                           "\"" + std::string(key) + "\" holds a callable, not a value");
    }
    if (type_of(existing.value) != type_of(value)) {
      throw DatastoreError(DatastoreError::Kind::kTypeMismatch,
                           "\"" + std::string(key) + "\" holds " +
                               std::string(to_string(type_of(existing.value))) + ", got " +
                               std::string(to_string(type_of(value))));
    }
    it->second.value = std::move(value);
    return;
  }
  Entry entry;
  entry.value = std::move(value);
  entries_.emplace(std::string(key), std::move(entry));
}

void Datastore::put_callable(std::string_view key, Signature signature, Callable fn) {
  check_key(key);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    if (!it->second.callable) {
      throw DatastoreError(DatastoreError::Kind::kTypeMismatch,
                           "\"" + std::string(key) + "\" holds a value, not a callable");
    }
    if (it->second.signature != signature) {
      throw DatastoreError(DatastoreError::Kind::kSignatureMismatch,
                           "\"" + std::string(key) + "\" has signature " +
                               to_string(it->second.signature) + ", got " + to_string(signature));
    }
    it->second.fn = std::move(fn);
    return;
  }
  Entry entry;
  entry.callable = true;
  entry.signature = std::move(signature);
  entry.fn = std::move(fn);
  entries_.emplace(std::string(key), std::move(entry));
}

const Value& Datastore::get(std::string_view key, ValueType expected) const {
  const Entry& entry = require(key);
  if (entry.callable) {
    throw DatastoreError(DatastoreError::Kind::kTypeMismatch,
                         "\"" + std::string(key) + "\" is a callable " + to_string(entry.signature) +
                             ", expected " + std::string(to_string(expected)));
  }
  const ValueType actual = type_of(entry.value);
  if (actual != expected) {
    throw DatastoreError(DatastoreError::Kind::kTypeMismatch,
                         "\"" + std::string(key) + "\" holds " + std::string(to_string(actual)) +
                             ", expected " + std::string(to_string(expected)));
  }
  return entry.value;
}

void Datastore::remove(std::string_view key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw DatastoreError(DatastoreError::Kind::kMissingKey,
                         "no datastore entry \"" + std::string(key) + "\"");
  }
  entries_.erase(it);
}

bool Datastore::is_callable(std::string_view key) const {
  auto it = entries_.find(key);
  return it != entries_.end() && it->second.callable;
}

Value Datastore::call(std::string_view key, std::span<const Value> args) const {
  const Entry& entry = require(key);
  if (!entry.callable) {
    throw DatastoreError(DatastoreError::Kind::kNotCallable,
                         "\"" + std::string(key) + "\" is a value, not a callable");
  }
  bool match = args.size() == entry.signature.params.size();
  for (std::size_t i = 0; match && i < args.size(); ++i) {
    match = type_of(args[i]) == entry.signature.params[i];
  }
  if (!match) {
    Signature given;
    for (const auto& a : args) given.params.push_back(type_of(a));
    given.result = entry.signature.result;
    throw DatastoreError(DatastoreError::Kind::kSignatureMismatch,
                         "\"" + std::string(key) + "\" expects " + to_string(entry.signature) +
                             ", called with " + to_string(given));
  }
  // The callable may put/remove entries, including this one.
  Callable fn = entry.fn;
  return fn(args);
}

std::vector<std::string> Datastore::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, e] : entries_) out.push_back(k);
  return out;
}

}  // namespace simbridge
