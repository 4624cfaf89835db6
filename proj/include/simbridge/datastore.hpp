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

#ifndef SIMBRIDGE_DATASTORE_HPP_
#define SIMBRIDGE_DATASTORE_HPP_

// Typed key/value blackboard shared by the bridge and the controller.
//
// Entries hold either a value of one of a closed set of types or a callable
// with a declared signature. The declared type of a key is fixed for as long
// as the key exists; a put with a different type is rejected.
//
// Reserved namespaces: "servo.*" (gain access), "camera.*" (frame stub) and
// "demo.*" (scenario flags).
//
// Not thread-safe. The bridge touches it from its loop context only.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simbridge/model.hpp"

namespace simbridge {

// Placeholder for a camera image: geometry only, no pixels.
struct FrameDescriptor {
  std::string camera;
  int width = 0;
  int height = 0;
  int channels = 3;

  bool operator==(const FrameDescriptor&) const = default;
};

using Value =
    std::variant<std::monostate, bool, std::int64_t, double, std::string, ServoGains, FrameDescriptor>;

enum class ValueType { kNone, kBool, kInt, kDouble, kString, kGains, kFrame };

std::string_view to_string(ValueType type);
ValueType type_of(const Value& value);

template <typename T>
constexpr ValueType value_type_of() {
  if constexpr (std::is_same_v<T, std::monostate>) return ValueType::kNone;
  else if constexpr (std::is_same_v<T, bool>) return ValueType::kBool;
  else if constexpr (std::is_same_v<T, std::int64_t>) return ValueType::kInt;
  else if constexpr (std::is_same_v<T, double>) return ValueType::kDouble;
  else if constexpr (std::is_same_v<T, std::string>) return ValueType::kString;
  else if constexpr (std::is_same_v<T, ServoGains>) return ValueType::kGains;
  else if constexpr (std::is_same_v<T, FrameDescriptor>) return ValueType::kFrame;
  else static_assert(sizeof(T) == 0, "type not storable in the datastore");
}

struct Signature {
  std::vector<ValueType> params;
  ValueType result = ValueType::kNone;

  bool operator==(const Signature&) const = default;
};

std::string to_string(const Signature& sig);

using Callable = std::function<Value(std::span<const Value>)>;

class DatastoreError : public std::runtime_error {
 public:
  enum class Kind { kInvalidKey, kMissingKey, kTypeMismatch, kSignatureMismatch, kNotCallable };

  DatastoreError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class Datastore {
 public:
  // Value entries. Overwrite requires the same type as the existing entry.
  void put(std::string_view key, Value value);

  template <typename T>
  void put_value(std::string_view key, T value) {
    put(key, Value(std::move(value)));
  }

  void put_callable(std::string_view key, Signature signature, Callable fn);

  const Value& get(std::string_view key, ValueType expected) const;

  template <typename T>
  const T& get_as(std::string_view key) const {
    return std::get<T>(get(key, value_type_of<T>()));
  }

  // nullptr when the key is absent or holds another type.
  template <typename T>
  const T* find(std::string_view key) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || it->second.callable) return nullptr;
    return std::get_if<T>(&it->second.value);
  }

  void remove(std::string_view key);
  bool contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }
  bool is_callable(std::string_view key) const;
  std::size_t size() const { return entries_.size(); }

  // Invokes the callable synchronously after checking arity and types.
  Value call(std::string_view key, std::span<const Value> args) const;
  Value call(std::string_view key, std::initializer_list<Value> args) const {
    return call(key, std::span<const Value>(args.begin(), args.size()));
  }

  std::vector<std::string> keys() const;

 private:
  struct Entry {
    bool callable = false;
    Value value;
    Signature signature;
    Callable fn;
  };

  static void check_key(std::string_view key);
  const Entry& require(std::string_view key) const;

  std::map<std::string, Entry, std::less<>> entries_;
};

// Reserved keys.
inline constexpr std::string_view kGetGainsKey = "servo.get_gains";
inline constexpr std::string_view kSetGainsKey = "servo.set_gains";
inline constexpr std::string_view kCameraKey = "camera.read";
std::string gains_key(std::string_view joint);

}  // namespace simbridge

#endif  // SIMBRIDGE_DATASTORE_HPP_
