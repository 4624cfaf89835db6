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

#include "simbridge/grasp.hpp"

#include <cmath>

namespace simbridge {

std::vector<std::string> validate_grasp(const GraspParams& params, const SceneModel& scene) {
  std::vector<std::string> errors;
  if (!scene.object_index(params.object)) {
    errors.push_back("grasp: unknown object \"" + params.object + "\"");
  }
  if (!scene.joint_index(params.lift_joint)) {
    errors.push_back("grasp: unknown lift joint \"" + params.lift_joint + "\"");
  }
  if (auto g = scene.joint_index(params.gripper_joint)) {
    if (!scene.joints()[*g].spec.pos_limits.contains(params.aperture_close)) {
      errors.push_back("grasp: aperture_close outside the gripper limits");
    }
  } else {
    errors.push_back("grasp: unknown gripper joint \"" + params.gripper_joint + "\"");
  }
  for (const auto& [joint, q] : params.reach_targets) {
    if (!scene.joint_index(joint)) errors.push_back("grasp: unknown reach joint \"" + joint + "\"");
  }
  if (params.reach_targets.empty()) errors.push_back("grasp: reach_targets is empty");
  if (!(params.reach_tol > 0.0)) errors.push_back("grasp: reach_tol must be > 0");
  if (!(params.lift_height > 0.0)) errors.push_back("grasp: lift_height must be > 0");
  if (!(params.clamp_force >= 0.0)) errors.push_back("grasp: clamp_force must be >= 0");
  return errors;
}

bool grasp_condition(const GraspParams& params, const SensorFrame& frame, const SceneModel& scene) {
  const double aperture = frame.joints[scene.require_joint(params.gripper_joint)].q;
  if (aperture > params.aperture_close) return false;
  for (const auto& [joint, target] : params.reach_targets) {
    const double q = frame.joints[scene.require_joint(joint)].q;
    if (std::abs(q - target) > params.reach_tol) return false;
  }
  return true;
}

bool lift_success(const GraspParams& params, const SensorFrame& frame, const SceneModel& scene) {
  auto k = scene.object_index(params.object);
  if (!k) return false;
  const ObjectReading& obj = frame.objects[*k];
  return obj.grasped && obj.z >= scene.objects()[*k].table_height + params.lift_height;
}

GraspMonitor::GraspMonitor(GraspParams params, const SceneModel& scene)
    : params_(std::move(params)), scene_(&scene) {
  if (auto errors = validate_grasp(params_, scene); !errors.empty()) {
    throw ValidationError(std::move(errors));
  }
  object_ = *scene.object_index(params_.object);
  lift_ = *scene.joint_index(params_.lift_joint);
  gripper_ = *scene.joint_index(params_.gripper_joint);
}

bool GraspMonitor::update(SensorFrame& frame, PhysicsState& state) {
  if (latched_ || state.objects[object_].grasped) return false;
  if (!grasp_condition(params_, frame, *scene_)) return false;

  attach_object(state, object_, lift_, gripper_, params_.clamp_force);
  latched_ = true;
  frame.objects[object_].grasped = true;
  for (const auto& sensor : scene_->sensors()) {
    if (sensor.spec.kind == SensorKind::kGripperForce && sensor.joint == gripper_) {
      frame.gripper_force[sensor.qualified] = params_.clamp_force;
    }
  }
  return true;
}

GraspParams grasp_from_json(const Json& doc, JsonReader& r) {
  GraspParams p;
  if (!r.check_object(doc)) return p;
  r.expect_keys(doc, {"object", "lift_joint", "gripper_joint", "reach_targets", "aperture_close",
                      "reach_tol", "clamp_force", "lift_height"});
  p.object = r.required_string(doc, "object");
  p.lift_joint = r.required_string(doc, "lift_joint");
  p.gripper_joint = r.required_string(doc, "gripper_joint");
  p.aperture_close = r.optional_number(doc, "aperture_close", p.aperture_close);
  p.reach_tol = r.optional_number(doc, "reach_tol", p.reach_tol);
  p.clamp_force = r.optional_number(doc, "clamp_force", p.clamp_force);
  p.lift_height = r.optional_number(doc, "lift_height", p.lift_height);
  if (const Json* targets = r.field(doc, "reach_targets", true)) {
    if (targets->is_object()) {
      for (const auto& [joint, q] : targets->items()) {
        if (q.is_number()) {
          p.reach_targets[joint] = q.get<double>();
        } else {
          r.fail("reach_targets." + joint, "expected a number");
        }
      }
    } else {
      r.fail("reach_targets", "expected an object");
    }
  }
  return p;
}

Json grasp_to_json(const GraspParams& p) {
  return Json{{"object", p.object},
              {"lift_joint", p.lift_joint},
              {"gripper_joint", p.gripper_joint},
              {"reach_targets", p.reach_targets},
              {"aperture_close", p.aperture_close},
              {"reach_tol", p.reach_tol},
              {"clamp_force", p.clamp_force},
              {"lift_height", p.lift_height}};
}

}  // namespace simbridge
