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

#include "simbridge/demo.hpp"

namespace simbridge {

namespace {

Json joint(const char* name, const char* kind, double inertia, double rotor, double gear,
           double damping, double coulomb, double stiction, double gravity, double lo, double hi,
           double vel, double torque) {
  return Json{{"name", name},
              {"kind", kind},
              {"inertia", inertia},
              {"rotor_inertia", rotor},
              {"gear", gear},
              {"damping", damping},
              {"coulomb_friction", coulomb},
              {"stiction", stiction},
              {"gravity_amp", gravity},
              {"pos_limits", {lo, hi}},
              {"vel_limit", vel},
              {"torque_limit", torque}};
}

Json servo(const char* name, double kp, double kd) {
  return Json{{"joint", name}, {"kind", "pd_servo"}, {"gains", {{"kp", kp}, {"kd", kd}}}};
}

Json encoder(const char* name, const char* joint) {
  return Json{{"name", name},
              {"kind", "encoder"},
              {"target", joint},
              {"noise_std", 1e-4},
              {"quantization", 1e-5}};
}

Json bound(double lo, double hi, double vel, double torque) {
  return Json{{"pos", {lo, hi}}, {"vel", vel}, {"torque", torque}};
}

Json arm_description() {
  return Json{
      {"name", "lift_arm"},
      {"joints",
       {joint("shoulder", "revolute", 0.05, 2e-6, 100, 0.2, 0.05, 0.08, 2.0, -1.5, 1.5, 3.0, 40),
        joint("elbow", "revolute", 0.02, 1e-6, 100, 0.1, 0.03, 0.05, 0.8, -2.0, 2.0, 3.0, 20),
        joint("lift", "prismatic", 1.0, 1e-5, 50, 2.0, 0.5, 0.8, 0.0, -0.05, 0.25, 0.5, 100),
        joint("gripper", "revolute", 0.001, 1e-7, 30, 0.005, 0.005, 0.008, 0.0, 0.0, 1.0, 2.0, 2)}},
      {"actuators",
       {servo("shoulder", 4.0, 0.1), servo("elbow", 2.0, 0.05), servo("lift", 40.0, 1.8),
        servo("gripper", 0.1, 0.004)}},
      {"sensors",
       {encoder("shoulder_enc", "shoulder"), encoder("elbow_enc", "elbow"),
        encoder("lift_enc", "lift"), encoder("gripper_enc", "gripper"),
        Json{{"name", "shoulder_torque"}, {"kind", "joint_torque"}, {"target", "shoulder"}},
        Json{{"name", "grip_force"}, {"kind", "gripper_force"}, {"target", "gripper"}}}},
      {"default_posture", {{"shoulder", 0.0}, {"elbow", 0.0}, {"lift", 0.1}, {"gripper", 0.1}}},
      {"bounds",
       {{"shoulder", bound(-1.45, 1.45, 2.5, 35)},
        {"elbow", bound(-1.9, 1.9, 2.5, 18)},
        {"lift", bound(-0.04, 0.24, 0.45, 90)},
        {"gripper", bound(0.0, 0.95, 1.8, 1.8)}}},
      {"collision_pairs", Json::array()}};
}

Json posture(double shoulder, double elbow, double lift, double gripper) {
  return Json{{"type", "posture"},
              {"targets",
               {{"arm/shoulder", shoulder},
                {"arm/elbow", elbow},
                {"arm/lift", lift},
                {"arm/gripper", gripper}}},
              {"stiffness", 36.0},
              {"damping_ratio", 1.0},
              {"weight", 1.0}};
}

Json error_below(double eps, double hold, std::vector<std::string> joints = {}) {
  Json c{{"kind", "error_below"}, {"eps", eps}, {"hold", hold}};
  if (!joints.empty()) c["joints"] = joints;
  return c;
}

Json state(const char* name, Json task, Json criteria, const char* next) {
  return Json{{"name", name},
              {"tasks", Json::array({std::move(task)})},
              {"criteria", std::move(criteria)},
              {"timeout", 0.0},
              {"next", next},
              {"terminal", false}};
}

}  // namespace

Json grasp_scenario_json() {
  Json initial{{"name", "Initial"},
               {"tasks", Json::array({Json{{"type", "posture"},
                                           {"targets", "default"},
                                           {"stiffness", 36.0},
                                           {"damping_ratio", 1.0},
                                           {"weight", 1.0}}})},
               {"criteria", Json::array({Json{{"kind", "timer"}, {"duration", 0.5}}})},
               {"timeout", 0.0},
               {"next", "PreGrasp"},
               {"terminal", false}};
  Json done{{"name", "Done"},
            {"tasks", Json::array({posture(0.8, 1.2, 0.15, 0.05)})},
            {"criteria", Json::array()},
            {"timeout", 0.0},
            {"next", ""},
            {"terminal", true}};

  Json states = Json::array({
      initial,
      state("PreGrasp", posture(0.6, 0.9, 0.1, 0.1), Json::array({error_below(0.01, 0.1)}),
            "OpenGripper"),
      state("OpenGripper", posture(0.6, 0.9, 0.1, 0.8),
            Json::array({error_below(0.01, 0.05, {"arm/gripper"})}), "Reach"),
      state("Reach", posture(0.8, 1.2, 0.0, 0.8), Json::array({error_below(0.01, 0.1)}),
            "CloseGripper"),
      state("CloseGripper", posture(0.8, 1.2, 0.0, 0.05),
            Json::array({Json{{"kind", "gripper_closed"}, {"joint", "arm/gripper"}, {"aperture_max", 0.2}},
                         Json{{"kind", "contact"}, {"sensor", "arm/grip_force"}, {"force_min", 5.0}}}),
            "Lift"),
      state("Lift", posture(0.8, 1.2, 0.15, 0.05),
            Json::array({Json{{"kind", "object_height"},
                              {"object", "box"},
                              {"z_min", 0.85},
                              {"require_grasp", true}}}),
            "Done"),
      done,
  });

  return Json{
      {"name", "grasp"},
      {"config",
       {{"dt_sim", 0.001},
        {"ctrl_divisor", 5},
        {"realtime_factor", 0.0},
        {"paused", false},
        {"rng_seed", 7},
        {"interpolation", "linear"},
        {"telemetry_rate_hz", 50.0}}},
      {"robots", Json::array({Json{{"instance", kDemoInstance}, {"description", arm_description()}}})},
      {"objects",
       Json::array({Json{{"name", "box"}, {"mass", 0.5}, {"rest_height", 0.75}, {"table_height", 0.75}}})},
      {"fsm", {{"initial", "Initial"}, {"states", states}}},
      {"grasp",
       {{"object", "box"},
        {"lift_joint", "arm/lift"},
        {"gripper_joint", "arm/gripper"},
        {"reach_targets", {{"arm/shoulder", 0.8}, {"arm/elbow", 1.2}, {"arm/lift", 0.0}}},
        {"aperture_close", 0.2},
        {"reach_tol", 0.02},
        {"clamp_force", 20.0},
        {"lift_height", 0.1}}},
      {"duration", 30.0}};
}

Scenario build_grasp_scenario() { return scenario_from_json(grasp_scenario_json()); }

}  // namespace simbridge
