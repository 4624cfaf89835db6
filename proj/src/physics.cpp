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

#include "simbridge/physics.hpp"

#include <algorithm>
#include <cmath>

namespace simbridge {

namespace {

// Perturbations expire once the remaining duration is below this fraction of
// a step; absorbs the rounding of repeated subtraction.
constexpr double kExpiryFraction = 1e-9;

double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

void count_down(double& remaining, double& magnitude, double dt) {
  if (remaining <= 0.0) return;
  remaining -= dt;
  if (remaining <= dt * kExpiryFraction) {
    remaining = 0.0;
    magnitude = 0.0;
  }
}

void step_joint(JointRuntime& rt, const SceneJoint& joint, const std::optional<double>& command,
                double dt) {
  const JointSpec& spec = joint.spec;
  const double inertia = joint.inertia_eff;

  double u = 0.0;
  if (command) {
    u = std::clamp(spec.gear * *command, -spec.torque_limit, spec.torque_limit);
  }
  const double ext = rt.ext_remaining > 0.0 ? rt.ext_torque : 0.0;
  const double gravity = -spec.gravity_amp * std::sin(rt.q);
  const double drive = u + ext - spec.damping * rt.qd + gravity;
  rt.last_applied = u;

  if (std::abs(rt.qd) < kStictionVelocity && std::abs(drive) <= spec.stiction) {
    rt.qd = 0.0;
    return;
  }

  // Gravity enters as half-kicks around the drift (velocity Verlet); the
  // remaining forces are a semi-implicit Euler kick with trapezoidal damping.
  double v = rt.qd + 0.5 * dt * gravity / inertia;
  const double c = 0.5 * dt * spec.damping / inertia;
  v = (v * (1.0 - c) + dt * (u + ext) / inertia) / (1.0 + c);

  // Kinetic friction opposes motion but never reverses it within a step.
  if (rt.qd != 0.0 && spec.coulomb_friction > 0.0) {
    const double dv = dt * spec.coulomb_friction / inertia;
    v = sign(v) * std::max(std::abs(v) - dv, 0.0);
  }

  double q = rt.q + dt * v;
  if (q > spec.pos_limits.max) {
    q = spec.pos_limits.max;
    v = 0.0;
  } else if (q < spec.pos_limits.min) {
    q = spec.pos_limits.min;
    v = 0.0;
  } else {
    v += 0.5 * dt * (-spec.gravity_amp * std::sin(q)) / inertia;
  }
  rt.q = q;
  rt.qd = v;
}

void step_object(ObjectRuntime& obj, const ObjectSpec& spec, const std::vector<JointRuntime>& joints,
                 double dt) {
  if (obj.grasped) {
    const double z = std::max(joints[obj.attach_joint].q + obj.anchor_offset, spec.table_height);
    obj.vz = (z - obj.z) / dt;
    obj.z = z;
    return;
  }
  const double force = obj.ext_remaining > 0.0 ? obj.ext_force : 0.0;
  obj.vz += dt * (force / spec.mass - kGravity);
  obj.z += dt * obj.vz;
  if (obj.z <= spec.table_height) {
    obj.z = spec.table_height;
    obj.vz = std::max(obj.vz, 0.0);
  }
}

}  // namespace

PhysicsState initial_state(const SceneModel& scene) {
  PhysicsState state;
  state.joints.resize(scene.joints().size());
  state.objects.resize(scene.objects().size());
  return reset(state, scene, scene.default_posture());
}

void step_in_place(PhysicsState& state, const SceneModel& scene, const MotorCommands& commands,
                   double dt) {
  const auto& joints = scene.joints();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PhysicsError("dt must be positive and finite");
  if (state.joints.size() != joints.size() || commands.size() != joints.size() ||
      state.objects.size() != scene.objects().size()) {
    throw PhysicsError("state/command size does not match the scene");
  }
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (!commands[i]) continue;
    if (!std::isfinite(*commands[i])) {
      throw PhysicsError("non-finite command for joint \"" + joints[i].qualified + "\"");
    }
    if (joints[i].actuator.passive()) {
      throw PhysicsError("command for passive joint \"" + joints[i].qualified + "\"");
    }
  }

  for (std::size_t i = 0; i < joints.size(); ++i) {
    JointRuntime& rt = state.joints[i];
    step_joint(rt, joints[i], commands[i], dt);
    count_down(rt.ext_remaining, rt.ext_torque, dt);
  }
  for (std::size_t k = 0; k < state.objects.size(); ++k) {
    ObjectRuntime& obj = state.objects[k];
    step_object(obj, scene.objects()[k], state.joints, dt);
    count_down(obj.ext_remaining, obj.ext_force, dt);
  }
  state.t += dt;
}

PhysicsState step(const PhysicsState& state, const SceneModel& scene,
                  const MotorCommands& commands, double dt) {
  PhysicsState next = state;
  step_in_place(next, scene, commands, dt);
  return next;
}

void apply_external_in_place(PhysicsState& state, const SceneModel& scene,
                             std::string_view target, double magnitude, double duration) {
  if (!std::isfinite(magnitude)) throw PhysicsError("perturbation magnitude is not finite");
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw PhysicsError("perturbation duration must be positive");
  }
  if (auto j = scene.joint_index(target)) {
    state.joints[*j].ext_torque = magnitude;
    state.joints[*j].ext_remaining = duration;
    return;
  }
  if (auto o = scene.object_index(target)) {
    state.objects[*o].ext_force = magnitude;
    state.objects[*o].ext_remaining = duration;
    return;
  }
  throw PhysicsError("unknown perturbation target \"" + std::string(target) + "\"");
}

PhysicsState apply_external(const PhysicsState& state, const SceneModel& scene,
                            std::string_view target, double magnitude, double duration) {
  PhysicsState next = state;
  apply_external_in_place(next, scene, target, magnitude, duration);
  return next;
}

double energy(const PhysicsState& state, const SceneModel& scene) {
  double e = 0.0;
  for (std::size_t i = 0; i < state.joints.size(); ++i) {
    const SceneJoint& j = scene.joints()[i];
    const JointRuntime& rt = state.joints[i];
    e += 0.5 * j.inertia_eff * rt.qd * rt.qd + j.spec.gravity_amp * (1.0 - std::cos(rt.q));
  }
  for (std::size_t k = 0; k < state.objects.size(); ++k) {
    const double m = scene.objects()[k].mass;
    const ObjectRuntime& obj = state.objects[k];
    e += m * kGravity * obj.z + 0.5 * m * obj.vz * obj.vz;
  }
  return e;
}

PhysicsState reset(const PhysicsState& state, const SceneModel& scene,
                   std::span<const double> posture) {
  const auto& joints = scene.joints();
  if (posture.size() != joints.size()) throw PhysicsError("posture size does not match the scene");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (!std::isfinite(posture[i]) || !joints[i].spec.pos_limits.contains(posture[i])) {
      throw PhysicsError("posture for \"" + joints[i].qualified + "\" is outside pos_limits");
    }
  }
  PhysicsState next = state;
  next.t = 0.0;
  next.joints.assign(joints.size(), JointRuntime{});
  for (std::size_t i = 0; i < joints.size(); ++i) next.joints[i].q = posture[i];
  next.objects.assign(scene.objects().size(), ObjectRuntime{});
  for (std::size_t k = 0; k < next.objects.size(); ++k) {
    next.objects[k].z = scene.objects()[k].rest_height;
  }
  return next;
}

void attach_object(PhysicsState& state, std::size_t object, std::size_t lift_joint,
                   std::size_t gripper_joint, double grip_force) {
  ObjectRuntime& obj = state.objects.at(object);
  obj.grasped = true;
  obj.attach_joint = lift_joint;
  obj.gripper_joint = gripper_joint;
  obj.anchor_offset = obj.z - state.joints.at(lift_joint).q;
  obj.grip_force = grip_force;
  obj.vz = 0.0;
}

void release_object(PhysicsState& state, std::size_t object) {
  ObjectRuntime& obj = state.objects.at(object);
  obj.grasped = false;
  obj.grip_force = 0.0;
  obj.anchor_offset = 0.0;
}

}  // namespace simbridge
