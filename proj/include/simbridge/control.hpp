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

#ifndef SIMBRIDGE_CONTROL_HPP_
#define SIMBRIDGE_CONTROL_HPP_

// Controller side of the bridge.
//
// Tasks produce desired joint accelerations; these are integrated twice into
// position/velocity references, which are then saturated to the controller
// bounds. Tasks servo on the controller's own reference state, so the
// reference trajectory is an open-loop integration that the PD servos track.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "simbridge/actuation.hpp"
#include "simbridge/model.hpp"
#include "simbridge/physics.hpp"

namespace simbridge {

struct JointReading {
  double q = 0.0;
  double qd = 0.0;
  double tau = 0.0;

  bool operator==(const JointReading&) const = default;
};

struct ObjectReading {
  double z = 0.0;
  double vz = 0.0;
  bool grasped = false;

  bool operator==(const ObjectReading&) const = default;
};

// Measurements at one sampling instant. `joints` and `objects` follow scene
// order; `ground_truth` is the exact state the readings were taken from.
struct SensorFrame {
  double t = 0.0;
  std::vector<JointReading> joints;
  std::vector<ObjectReading> objects;
  std::map<std::string, double> gripper_force;  // by qualified sensor name
  std::vector<JointRuntime> ground_truth;

  bool operator==(const SensorFrame&) const = default;
};

struct PostureTask {
  std::map<std::string, double> targets;  // qualified joint -> rad
  double stiffness = 100.0;               // 1/s^2
  double damping_ratio = 1.0;
  double weight = 1.0;

  bool operator==(const PostureTask&) const = default;
};

// One reference per scene joint. Passive joints carry a sample that is never
// used.
struct ControlOutput {
  std::vector<ReferenceSample> refs;

  bool operator==(const ControlOutput&) const = default;
};

// Desired accelerations of the joints the task targets, indexed by scene
// joint. Throws std::out_of_range for an unknown target joint.
std::map<std::size_t, double> posture_accel(const PostureTask& task, const SceneModel& scene,
                                            std::span<const ReferenceSample> refs);

// Semi-implicit: velocity first, then position with the new velocity.
ReferenceSample double_integrate(const ReferenceSample& current, double accel, double dt);

ControlOutput clamp_to_bounds(ControlOutput out, const SceneModel& scene);

// One controller period: task accelerations (weighted average where tasks
// overlap, zero elsewhere), velocity-limited double integration, then
// position saturation. Passive joints are left untouched.
ControlOutput controller_tick(const SensorFrame& frame, std::span<const PostureTask> tasks,
                              const ControlOutput& current, const SceneModel& scene,
                              double dt_ctrl);

// References at rest on the given posture.
ControlOutput hold_posture(std::span<const double> posture);

}  // namespace simbridge

#endif  // SIMBRIDGE_CONTROL_HPP_
