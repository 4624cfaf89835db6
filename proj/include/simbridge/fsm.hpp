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

#ifndef SIMBRIDGE_FSM_HPP_
#define SIMBRIDGE_FSM_HPP_

// Flat finite-state machine driving the controller's task set.
//
// Each state owns a list of posture tasks and a conjunction of completion
// criteria. The machine is evaluated once per controller tick; when every
// criterion of the current state holds (or its timeout expires) it moves to
// the state's successor. A state without criteria only leaves on timeout or
// operator request.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "simbridge/control.hpp"
#include "simbridge/datastore.hpp"
#include "simbridge/json_reader.hpp"
#include "simbridge/model.hpp"

namespace simbridge {

struct TimerCriterion {
  double duration = 0.0;
  bool operator==(const TimerCriterion&) const = default;
};

// Largest |target - q| over `joints` (default: every joint the state's tasks
// target) stays below eps for `hold` seconds.
struct ErrorBelowCriterion {
  double eps = 0.0;
  double hold = 0.0;
  std::vector<std::string> joints;
  bool operator==(const ErrorBelowCriterion&) const = default;
};

struct GripperClosedCriterion {
  std::string joint;
  double aperture_max = 0.0;
  bool operator==(const GripperClosedCriterion&) const = default;
};

struct ObjectHeightCriterion {
  std::string object;
  double z_min = 0.0;
  bool require_grasp = false;
  bool operator==(const ObjectHeightCriterion&) const = default;
};

// Reading of a gripper force sensor reaches force_min.
struct ContactCriterion {
  std::string sensor;
  double force_min = 0.0;
  bool operator==(const ContactCriterion&) const = default;
};

// Escape hatch: a boolean datastore entry is true.
struct DatastoreFlagCriterion {
  std::string key;
  bool operator==(const DatastoreFlagCriterion&) const = default;
};

using Criterion = std::variant<TimerCriterion, ErrorBelowCriterion, GripperClosedCriterion,
                               ObjectHeightCriterion, ContactCriterion, DatastoreFlagCriterion>;

struct StateDef {
  std::string name;
  std::vector<PostureTask> tasks;
  std::vector<Criterion> criteria;  // all must hold; empty never completes
  double timeout = 0.0;             // 0 disables
  std::string next;                 // empty when there is no successor
  bool terminal = false;

  bool operator==(const StateDef&) const = default;
};

struct StateMachine {
  std::string initial;
  std::vector<StateDef> states;

  const StateDef* find(std::string_view name) const;
  std::vector<std::string> state_names() const;

  bool operator==(const StateMachine&) const = default;
};

struct FsmStatus {
  std::string current;
  double entered_at = 0.0;
  double hold_accum = 0.0;
  bool terminal = false;

  bool operator==(const FsmStatus&) const = default;
};

class FsmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MachineReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

// Structural checks. With a scene, also resolves every joint/object/sensor
// the machine names and checks task targets against the controller bounds.
MachineReport validate_machine(const StateMachine& machine, const SceneModel* scene = nullptr);

FsmStatus initial_status(const StateMachine& machine, double t);

struct FsmStepResult {
  FsmStatus status;
  bool transitioned = false;
  bool timed_out = false;  // transition forced by the state timeout
  std::span<const PostureTask> tasks;  // views into the machine
};

// Evaluates the current state's criteria against `frame`; at most one
// transition per call. `store` backs DatastoreFlagCriterion and may be null.
FsmStepResult fsm_step(const FsmStatus& status, const StateMachine& machine,
                       const SensorFrame& frame, double dt_ctrl, const SceneModel& scene,
                       const Datastore* store = nullptr);

// Operator-requested jump, ignoring criteria. Targeting the current state
// re-enters it. Throws FsmError for an unknown target or a terminal status.
FsmStatus request_transition(const FsmStatus& status, const StateMachine& machine,
                             std::string_view target, double t);

std::span<const PostureTask> active_tasks(const StateMachine& machine, const FsmStatus& status);

// Largest tracking error of an error_below criterion (for tests and telemetry).
double tracking_error(const ErrorBelowCriterion& criterion, const StateDef& state,
                      const SensorFrame& frame, const SceneModel& scene);

// JSON section {"initial": ..., "states": [...]}. A posture task whose
// "targets" is the string "default" targets the scene's default posture.
StateMachine machine_from_json(const Json& doc, JsonReader& reader, const SceneModel& scene);
Json machine_to_json(const StateMachine& machine);

}  // namespace simbridge

#endif  // SIMBRIDGE_FSM_HPP_
