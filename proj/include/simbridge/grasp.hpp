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

#ifndef SIMBRIDGE_GRASP_HPP_
#define SIMBRIDGE_GRASP_HPP_

// Threshold-triggered kinematic grasping.
//
// There is no contact model: once the gripper has closed past
// `aperture_close` while the arm sits within `reach_tol` of the reach
// posture, the object is rigidly attached to the lift joint and the gripper
// force sensors read `clamp_force`. Attachment is permanent until the
// physics state is reset.

#include <map>
#include <string>
#include <vector>

#include "simbridge/control.hpp"
#include "simbridge/json_reader.hpp"
#include "simbridge/model.hpp"
#include "simbridge/physics.hpp"

namespace simbridge {

struct GraspParams {
  std::string object;
  std::string lift_joint;
  std::string gripper_joint;
  // Arm posture at which the gripper surrounds the object.
  std::map<std::string, double> reach_targets;
  double aperture_close = 0.2;
  double reach_tol = 0.02;
  double clamp_force = 20.0;
  double lift_height = 0.1;

  bool operator==(const GraspParams&) const = default;
};

std::vector<std::string> validate_grasp(const GraspParams& params, const SceneModel& scene);

// Gripper closed and arm at the reach posture.
bool grasp_condition(const GraspParams& params, const SensorFrame& frame, const SceneModel& scene);

// Object grasped and at least lift_height above its table.
bool lift_success(const GraspParams& params, const SensorFrame& frame, const SceneModel& scene);

class GraspMonitor {
 public:
  // Throws ValidationError when the params do not resolve in the scene.
  GraspMonitor(GraspParams params, const SceneModel& scene);

  // Called once per controller tick. Latches the attachment the first time
  // grasp_condition holds and patches `frame` so the same tick sees the grasp.
  // Returns true on the latching tick.
  bool update(SensorFrame& frame, PhysicsState& state);

  bool latched() const { return latched_; }
  void reset() { latched_ = false; }
  const GraspParams& params() const { return params_; }

 private:
  GraspParams params_;
  const SceneModel* scene_;
  std::size_t object_;
  std::size_t lift_;
  std::size_t gripper_;
  bool latched_ = false;
};

GraspParams grasp_from_json(const Json& doc, JsonReader& reader);
Json grasp_to_json(const GraspParams& params);

}  // namespace simbridge

#endif  // SIMBRIDGE_GRASP_HPP_
