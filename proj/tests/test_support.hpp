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

#ifndef SIMBRIDGE_TESTS_TEST_SUPPORT_HPP_
#define SIMBRIDGE_TESTS_TEST_SUPPORT_HPP_

// Small scene and scenario builders shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "simbridge/bridge.hpp"
#include "simbridge/command.hpp"
#include "simbridge/model.hpp"
#include "simbridge/physics.hpp"
#include "simbridge/scenario.hpp"

namespace simbridge::testing {

inline JointSpec free_joint(std::string name, double inertia = 1.0) {
  JointSpec j;
  j.name = std::move(name);
  j.inertia = inertia;
  j.pos_limits = {-10.0, 10.0};
  j.vel_limit = 50.0;
  j.torque_limit = 100.0;
  return j;
}

inline ActuatorSpec servo(std::string joint, double kp, double kd) {
  return ActuatorSpec{std::move(joint), ActuatorKind::kPdServo, {kp, kd}};
}

inline ActuatorSpec passive(std::string joint) {
  return ActuatorSpec{std::move(joint), ActuatorKind::kNone, {}};
}

// One robot; bounds equal the simulation limits.
inline RobotDescription robot(std::string name, std::vector<JointSpec> joints,
                              std::vector<ActuatorSpec> actuators) {
  RobotDescription d;
  d.name = std::move(name);
  d.joints = std::move(joints);
  d.actuators = std::move(actuators);
  return d;
}

inline SceneModel single_scene(RobotDescription desc, std::string instance = "r",
                               std::vector<ObjectSpec> objects = {}) {
  ControlBounds b = bounds_from_limits(desc);
  return merge_scene({SceneEntry{std::move(instance), std::move(desc), std::move(b)}},
                     std::move(objects));
}

// Scene with one passive joint, for open-loop physics checks.
inline SceneModel passive_scene(const JointSpec& joint) {
  return single_scene(robot("p", {joint}, {passive(joint.name)}));
}

inline MotorCommands no_commands(const SceneModel& scene) {
  return MotorCommands(scene.joints().size());
}

// Scenario over `scene` with default rates, no machine, unlimited speed.
inline Scenario plain_scenario(SceneModel scene, std::string name = "plain") {
  Scenario s;
  s.name = std::move(name);
  s.scene = std::move(scene);
  s.config.rng_seed = 1;
  s.duration = 1.0;
  return s;
}

// A servoed revolute joint with a nonzero default posture target range.
inline SceneModel servo_scene(double kp = 50.0, double kd = 2.0) {
  JointSpec j = free_joint("j", 0.05);
  j.rotor_inertia = 1e-6;
  j.gear = 10.0;
  j.damping = 0.05;
  j.pos_limits = {-2.0, 2.0};
  j.vel_limit = 5.0;
  j.torque_limit = 50.0;
  return single_scene(robot("arm", {j}, {servo("j", kp, kd)}));
}

// Random instance of every command variant, in variant order.
inline std::vector<Command> random_commands(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::uniform_int_distribution<int> len(0, 12);
  auto word = [&] {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + rng() % 26));
    if (rng() % 4 == 0) s += "/\"\u00e9 x";
    return s;
  };
  return {ApplyPerturbation{word(), u(rng), std::abs(u(rng))},
          SetGains{word(), std::abs(u(rng)), std::abs(u(rng))},
          SetSpeed{std::abs(u(rng)) + 1e-3},
          Pause{rng() % 2 == 0},
          StepOnce{static_cast<std::int64_t>(rng() % 100000) + 1},
          Transition{word()},
          SetPostureTarget{word(), u(rng)},
          ResetScenario{}};
}

inline std::filesystem::path source_dir() { return SIMBRIDGE_SOURCE_DIR; }

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("simbridge-" + tag + "-" + std::to_string(rng() % 1000000000ULL));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace simbridge::testing

#endif  // SIMBRIDGE_TESTS_TEST_SUPPORT_HPP_
