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

#ifndef SIMBRIDGE_COMMAND_HPP_
#define SIMBRIDGE_COMMAND_HPP_

// Operator commands accepted by the simulation loop, and their JSON form
// {"name": "<variant>", <named parameters>} shared by scenario scripts and
// the network protocol.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

namespace simbridge {

using Json = nlohmann::json;

// Joint torque (N·m) or object vertical force (N) on `target`.
struct ApplyPerturbation {
  std::string target;
  double magnitude = 0.0;
  double duration = 0.0;
  bool operator==(const ApplyPerturbation&) const = default;
};

struct SetGains {
  std::string joint;
  double kp = 0.0;
  double kd = 0.0;
  bool operator==(const SetGains&) const = default;
};

struct SetSpeed {
  double factor = 1.0;
  bool operator==(const SetSpeed&) const = default;
};

// paused = false resumes.
struct Pause {
  bool paused = true;
  bool operator==(const Pause&) const = default;
};

// Advances `substeps` physics steps while paused; ignored while running.
struct StepOnce {
  std::int64_t substeps = 1;
  bool operator==(const StepOnce&) const = default;
};

struct Transition {
  std::string state;
  bool operator==(const Transition&) const = default;
};

// Operator override of one joint's posture target, kept until the next FSM
// transition or reset.
struct SetPostureTarget {
  std::string joint;
  double position = 0.0;
  bool operator==(const SetPostureTarget&) const = default;
};

struct ResetScenario {
  bool operator==(const ResetScenario&) const = default;
};

using Command = std::variant<ApplyPerturbation, SetGains, SetSpeed, Pause, StepOnce, Transition,
                             SetPostureTarget, ResetScenario>;

std::string_view command_name(const Command& cmd);

// Whether the command changes simulation state (as opposed to pacing only).
bool is_state_changing(const Command& cmd);

// Structured decode failure. `code` is one of: malformed, missing_type,
// missing_field, unknown_field, unknown_cmd, type_mismatch, invalid_value.
class CodecError : public std::runtime_error {
 public:
  CodecError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

Json command_to_json(const Command& cmd);
// Strict: unknown keys, missing keys, wrong types and non-finite numbers are
// CodecErrors.
Command command_from_json(const Json& j);

}  // namespace simbridge

#endif  // SIMBRIDGE_COMMAND_HPP_
