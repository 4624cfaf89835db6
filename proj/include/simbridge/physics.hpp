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

#ifndef SIMBRIDGE_PHYSICS_HPP_
#define SIMBRIDGE_PHYSICS_HPP_

// Fixed-timestep joint-space dynamics.
//
// Every joint is an independent one-DoF inertia (with reflected rotor
// inertia) subject to the geared actuator torque, viscous damping, Coulomb
// friction with a stiction latch, a -gravity_amp*sin(q) gravity torque, and
// position limits. Objects are vertical point masses that rest on a table or
// ride along with a joint while grasped.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simbridge/model.hpp"

namespace simbridge {

inline constexpr double kGravity = 9.81;
// Velocity window of the stiction latch.
inline constexpr double kStictionVelocity = 1e-3;

struct JointRuntime {
  double q = 0.0;
  double qd = 0.0;
  double last_applied = 0.0;  // joint-side actuator torque of the previous step
  double ext_torque = 0.0;
  double ext_remaining = 0.0;  // seconds of perturbation left

  bool operator==(const JointRuntime&) const = default;
};

struct ObjectRuntime {
  double z = 0.0;
  double vz = 0.0;
  bool grasped = false;
  // Valid while grasped: z = q[attach_joint] + anchor_offset.
  std::size_t attach_joint = 0;
  double anchor_offset = 0.0;
  std::size_t gripper_joint = 0;
  double grip_force = 0.0;
  double ext_force = 0.0;
  double ext_remaining = 0.0;

  bool operator==(const ObjectRuntime&) const = default;
};

// Indexed like SceneModel::joints() and SceneModel::objects().
struct PhysicsState {
  double t = 0.0;
  std::vector<JointRuntime> joints;
  std::vector<ObjectRuntime> objects;

  bool operator==(const PhysicsState&) const = default;
};

class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Motor-side command per joint; nullopt for joints that receive none.
using MotorCommands = std::vector<std::optional<double>>;

// State at rest in the scene's default posture.
PhysicsState initial_state(const SceneModel& scene);

// Advances the state by dt. Throws PhysicsError on a non-finite command, a
// command on a passive joint, or a size mismatch.
PhysicsState step(const PhysicsState& state, const SceneModel& scene,
                  const MotorCommands& commands, double dt);
// In-place variant used by the simulation loop.
void step_in_place(PhysicsState& state, const SceneModel& scene, const MotorCommands& commands,
                   double dt);

// Joint torque or object vertical force for `duration` seconds. A later call
// on the same target replaces the earlier one.
PhysicsState apply_external(const PhysicsState& state, const SceneModel& scene,
                            std::string_view target, double magnitude, double duration);
void apply_external_in_place(PhysicsState& state, const SceneModel& scene,
                             std::string_view target, double magnitude, double duration);

double energy(const PhysicsState& state, const SceneModel& scene);

// Sets q to `posture` (full vector, scene order) with everything else at rest
// and t = 0. Throws PhysicsError when a value lies outside pos_limits.
PhysicsState reset(const PhysicsState& state, const SceneModel& scene,
                   std::span<const double> posture);

// Rigidly couples `object` to `lift_joint`, preserving its current height.
void attach_object(PhysicsState& state, std::size_t object, std::size_t lift_joint,
                   std::size_t gripper_joint, double grip_force);
void release_object(PhysicsState& state, std::size_t object);

}  // namespace simbridge

#endif  // SIMBRIDGE_PHYSICS_HPP_
