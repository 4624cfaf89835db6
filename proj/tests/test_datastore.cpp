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


#include <doctest.h>

#include "simbridge/datastore.hpp"

using namespace simbridge;

TEST_SUITE("datastore") {

TEST_CASE("put then get round-trips every value type") {
  Datastore store;
  store.put_value("demo.flag", true);
  store.put_value("demo.count", std::int64_t{42});
  store.put_value("demo.x", 1.25);
  store.put_value("demo.name", std::string("box"));
  store.put_value("servo.gains.a/j1", ServoGains{200, 20});
  store.put_value("camera.last", FrameDescriptor{"wrist", 640, 480, 3});

  CHECK(store.get_as<bool>("demo.flag"));
  CHECK(store.get_as<std::int64_t>("demo.count") == 42);
  CHECK(store.get_as<double>("demo.x") == 1.25);
  CHECK(store.get_as<std::string>("demo.name") == "box");
  CHECK(store.get_as<ServoGains>("servo.gains.a/j1") == ServoGains{200, 20});
  CHECK(store.get_as<FrameDescriptor>("camera.last") == FrameDescriptor{"wrist", 640, 480, 3});
  CHECK(store.size() == 6);
}

TEST_CASE("reading with the wrong type names both types") {
  Datastore store;
  store.put_value("demo.x", 1.0);
  try {
    store.get("demo.x", ValueType::kBool);
    FAIL("expected a type mismatch");
  } catch (const DatastoreError& e) {
    CHECK(e.kind() == DatastoreError::Kind::kTypeMismatch);
    const std::string what = e.what();
    CHECK(what.find(std::string(to_string(ValueType::kDouble))) != std::string::npos);
    CHECK(what.find(std::string(to_string(ValueType::kBool))) != std::string::npos);
  }
  CHECK(store.find<bool>("demo.x") == nullptr);
  CHECK(store.find<double>("demo.x") != nullptr);
}

TEST_CASE("overwrite keeps the declared type") {
  Datastore store;
  store.put_value("demo.x", 1.0);
  store.put_value("demo.x", 2.0);
  CHECK(store.get_as<double>("demo.x") == 2.0);
  CHECK_THROWS_AS(store.put_value("demo.x", true), DatastoreError);
  store.remove("demo.x");
  store.put_value("demo.x", true);
  CHECK(store.get_as<bool>("demo.x"));
}

TEST_CASE("missing and malformed keys") {
  Datastore store;
  CHECK_THROWS_AS(store.get("demo.none", ValueType::kDouble), DatastoreError);
  CHECK_THROWS_AS(store.remove("demo.none"), DatastoreError);
  CHECK_THROWS_AS(store.put_value("", 1.0), DatastoreError);
  CHECK_THROWS_AS(store.put_value("has space", 1.0), DatastoreError);
  try {
    store.call("demo.none", {});
  } catch (const DatastoreError& e) {
    CHECK(e.kind() == DatastoreError::Kind::kMissingKey);
  }
}

TEST_CASE("keys are independent") {
  Datastore store;
  store.put_value("a.x", 1.0);
  store.put_value("b.x", 2.0);
  store.put_value("a.x", 3.0);
  store.remove("a.x");
  CHECK(store.get_as<double>("b.x") == 2.0);
  CHECK_FALSE(store.contains("a.x"));
}

TEST_CASE("callables check arity and argument types") {
  Datastore store;
  int calls = 0;
  store.put_callable("demo.add", Signature{{ValueType::kDouble, ValueType::kDouble}, ValueType::kDouble},
                     [&](std::span<const Value> args) {
                       ++calls;
                       return Value(std::get<double>(args[0]) + std::get<double>(args[1]));
                     });
  CHECK(store.is_callable("demo.add"));
  CHECK(std::get<double>(store.call("demo.add", {Value(1.5), Value(2.0)})) == 3.5);
  CHECK(calls == 1);

  try {
    store.call("demo.add", {Value(1.5)});
    FAIL("expected a signature mismatch");
  } catch (const DatastoreError& e) {
    CHECK(e.kind() == DatastoreError::Kind::kSignatureMismatch);
  }
  CHECK_THROWS_AS(store.call("demo.add", {Value(1.5), Value(true)}), DatastoreError);
  CHECK(calls == 1);

  // A value entry is not callable, and a callable has no value.
  store.put_value("demo.v", 1.0);
  try {
    store.call("demo.v", {});
    FAIL("expected not callable");
  } catch (const DatastoreError& e) {
    CHECK(e.kind() == DatastoreError::Kind::kNotCallable);
  }
  CHECK_THROWS_AS(store.get("demo.add", ValueType::kDouble), DatastoreError);
}

TEST_CASE("calling leaves the store alone unless the callable writes") {
  Datastore store;
  store.put_value("demo.x", 1.0);
  store.put_callable("demo.read", Signature{{}, ValueType::kDouble},
                     [&](std::span<const Value>) { return Value(store.get_as<double>("demo.x")); });
  const auto before = store.keys();
  CHECK(std::get<double>(store.call("demo.read", {})) == 1.0);
  CHECK(store.keys() == before);

  store.put_callable("demo.write", Signature{{ValueType::kDouble}, ValueType::kNone},
                     [&](std::span<const Value> args) {
                       store.put_value("demo.x", std::get<double>(args[0]));
                       return Value{};
                     });
  store.call("demo.write", {Value(7.0)});
  CHECK(store.get_as<double>("demo.x") == 7.0);
}

TEST_CASE("gain keys") {
  CHECK(gains_key("arm/shoulder") == "servo.gains.arm/shoulder");
}

}  // TEST_SUITE
