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

#include "simbridge/command.hpp"

#include <cmath>
#include <initializer_list>

namespace simbridge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Field access that throws CodecError on the first problem.
class Fields {
 public:
  Fields(const Json& obj, std::string_view cmd, std::initializer_list<std::string_view> allowed)
      : obj_(obj), cmd_(cmd) {
    for (const auto& item : obj.items()) {
      if (item.key() == "name") continue;
      bool known = false;
      for (auto k : allowed) known = known || item.key() == k;
      if (!known) {
        throw CodecError("unknown_field",
                         std::string(cmd_) + ": unknown field \"" + item.key() + "\"");
      }
    }
  }

  std::string str(std::string_view key) const {
    const Json& v = at(key);
    if (!v.is_string()) mismatch(key, "a string");
    return v.get<std::string>();
  }

  double num(std::string_view key) const {
    const Json& v = at(key);
    if (!v.is_number()) mismatch(key, "a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      throw CodecError("invalid_value", std::string(cmd_) + ": \"" + std::string(key) + "\" is not finite");
    }
    return x;
  }

  std::int64_t integer(std::string_view key) const {
    const Json& v = at(key);
    if (!v.is_number_integer()) mismatch(key, "an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(std::string_view key, bool fallback) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) return fallback;
    if (!it->is_boolean()) mismatch(key, "a boolean");
    return it->get<bool>();
  }

 private:
  const Json& at(std::string_view key) const {
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      throw CodecError("missing_field", std::string(cmd_) + ": missing field \"" + std::string(key) + "\"");
    }
    return *it;
  }

  [[noreturn]] void mismatch(std::string_view key, std::string_view expected) const {
    throw CodecError("type_mismatch", std::string(cmd_) + ": \"" + std::string(key) +
                                          "\" must be " + std::string(expected));
  }

  const Json& obj_;
  std::string_view cmd_;
};

}  // namespace

std::string_view command_name(const Command& cmd) {
  return std::visit(Overloaded{
                        [](const ApplyPerturbation&) { return "apply_perturbation"; },
                        [](const SetGains&) { return "set_gains"; },
                        [](const SetSpeed&) { return "set_speed"; },
                        [](const Pause&) { return "pause"; },
                        [](const StepOnce&) { return "step_once"; },
                        [](const Transition&) { return "transition"; },
                        [](const SetPostureTarget&) { return "set_posture_target"; },
                        [](const ResetScenario&) { return "reset_scenario"; },
                    },
                    cmd);
}

bool is_state_changing(const Command& cmd) { return !std::holds_alternative<SetSpeed>(cmd); }

Json command_to_json(const Command& cmd) {
  Json j = std::visit(
      Overloaded{
          [](const ApplyPerturbation& c) {
            return Json{{"target", c.target}, {"magnitude", c.magnitude}, {"duration", c.duration}};
          },
          [](const SetGains& c) { return Json{{"joint", c.joint}, {"kp", c.kp}, {"kd", c.kd}}; },
          [](const SetSpeed& c) { return Json{{"factor", c.factor}}; },
          [](const Pause& c) { return Json{{"paused", c.paused}}; },
          [](const StepOnce& c) { return Json{{"substeps", c.substeps}}; },
          [](const Transition& c) { return Json{{"state", c.state}}; },
          [](const SetPostureTarget& c) { return Json{{"joint", c.joint}, {"position", c.position}}; },
          [](const ResetScenario&) { return Json::object(); },
      },
      cmd);
  j["name"] = command_name(cmd);
  return j;
}

Command command_from_json(const Json& j) {
  if (!j.is_object()) throw CodecError("malformed", "command must be an object");
  auto it = j.find("name");
  if (it == j.end()) throw CodecError("missing_field", "command: missing field \"name\"");
  if (!it->is_string()) throw CodecError("type_mismatch", "command: \"name\" must be a string");
  const std::string name = it->get<std::string>();

  if (name == "apply_perturbation") {
    Fields f(j, name, {"target", "magnitude", "duration"});
    return ApplyPerturbation{f.str("target"), f.num("magnitude"), f.num("duration")};
  }
  if (name == "set_gains") {
    Fields f(j, name, {"joint", "kp", "kd"});
    return SetGains{f.str("joint"), f.num("kp"), f.num("kd")};
  }
  if (name == "set_speed") {
    Fields f(j, name, {"factor"});
    return SetSpeed{f.num("factor")};
  }
  if (name == "pause") {
    Fields f(j, name, {"paused"});
    return Pause{f.boolean("paused", true)};
  }
  if (name == "step_once") {
    Fields f(j, name, {"substeps"});
    return StepOnce{f.integer("substeps")};
  }
  if (name == "transition") {
    Fields f(j, name, {"state"});
    return Transition{f.str("state")};
  }
  if (name == "set_posture_target") {
    Fields f(j, name, {"joint", "position"});
    return SetPostureTarget{f.str("joint"), f.num("position")};
  }
  if (name == "reset_scenario") {
    Fields f(j, name, {});
    return ResetScenario{};
  }
  throw CodecError("unknown_cmd", "unknown command \"" + name + "\"");
}

}  // namespace simbridge
