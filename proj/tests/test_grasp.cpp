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


#include <doctest.h>

#include "simbridge/demo.hpp"
#include "simbridge/grasp.hpp"

using namespace simbridge;

namespace {

struct Fixture {
  Scenario sc = build_grasp_scenario();
  const SceneModel& scene = sc.scene;
  const GraspParams& params = *sc.grasp;

  // Exact readings of the arm at the reach posture with the given aperture.
  SensorFrame frame(double gripper) const {
    SensorFrame f;
    f.joints.resize(scene.joints().size());
    f.objects.resize(scene.objects().size());
    for (const auto& [joint, q] : params.reach_targets) f.joints[scene.require_joint(joint)].q = q;
    f.joints[scene.require_joint(params.gripper_joint)].q = gripper;
    f.objects[0].z = scene.objects()[0].rest_height;
    return f;
  }
};

}  // namespace

TEST_SUITE("grasp") {

TEST_CASE("grasp condition needs a closed gripper at the reach posture") {
  const Fixture fx;
  CHECK_FALSE(grasp_condition(fx.params, fx.frame(0.8), fx.scene));  // wide open
  CHECK(grasp_condition(fx.params, fx.frame(fx.params.aperture_close), fx.scene));
  CHECK(grasp_condition(fx.params, fx.frame(0.05), fx.scene));

  SensorFrame far = fx.frame(0.05);
  far.joints[fx.scene.require_joint("arm/shoulder")].q += 2.0 * fx.params.reach_tol;
  CHECK_FALSE(grasp_condition(fx.params, far, fx.scene));  // no phantom grasp

  SensorFrame edge = fx.frame(0.05);
  edge.joints[fx.scene.require_joint("arm/elbow")].q += 0.5 * fx.params.reach_tol;
  CHECK(grasp_condition(fx.params, edge, fx.scene));
}

TEST_CASE("lift success is inclusive and needs the grasp") {
  const Fixture fx;
  const double table = fx.scene.objects()[0].table_height;
  SensorFrame f = fx.frame(0.05);

  f.objects[0] = {table, 0.0, true};
  CHECK_FALSE(lift_success(fx.params, f, fx.scene));

  f.objects[0] = {table + fx.params.lift_height, 0.0, true};
  CHECK(lift_success(fx.params, f, fx.scene));

  for (double z : {table, table + 0.1, table + 5.0}) {
    f.objects[0] = {z, 0.0, false};
    CHECK_FALSE(lift_success(fx.params, f, fx.scene));
  }
}

TEST_CASE("the monitor latches once and patches the frame") {
  const Fixture fx;
  GraspMonitor monitor(fx.params, fx.scene);
  PhysicsState state = initial_state(fx.scene);

  SensorFrame open = fx.frame(0.8);
  CHECK_FALSE(monitor.update(open, state));
  CHECK_FALSE(state.objects[0].grasped);

  SensorFrame closed = fx.frame(0.05);
  CHECK(monitor.update(closed, state));
  CHECK(monitor.latched());
  CHECK(state.objects[0].grasped);
  CHECK(closed.objects[0].grasped);
  CHECK(closed.gripper_force.at("arm/grip_force") == fx.params.clamp_force);

  SensorFrame again = fx.frame(0.05);
  CHECK_FALSE(monitor.update(again, state));

  monitor.reset();
  CHECK_FALSE(monitor.latched());
}

TEST_CASE("a grasped object tracks the lift joint exactly") {
  const Fixture fx;
  GraspMonitor monitor(fx.params, fx.scene);
  PhysicsState state = initial_state(fx.scene);
  SensorFrame f = fx.frame(0.05);
  REQUIRE(monitor.update(f, state));
  const std::size_t lift = fx.scene.require_joint("arm/lift");
  const double z0 = state.objects[0].z;
  const double anchor = state.joints[lift].q;
  const MotorCommands cmds(fx.scene.joints().size(), 0.0);
  for (int n = 0; n < 500; ++n) {
    state.joints[lift].q = anchor + 0.0003 * n;
    step_in_place(state, fx.scene, cmds, 0.001);
    REQUIRE(state.objects[0].grasped);
    CHECK(state.objects[0].z == doctest::Approx(z0 + (state.joints[lift].q - anchor)).epsilon(1e-12));
  }
}

TEST_CASE("grasp parameters are validated") {
  const Fixture fx;
  GraspParams p = fx.params;
  p.object = "ghost";
  p.lift_height = 0.0;
  const auto problems = validate_grasp(p, fx.scene);
  CHECK(problems.size() == 2);
  CHECK_THROWS_AS(GraspMonitor(p, fx.scene), ValidationError);

  GraspParams outside = fx.params;
  outside.aperture_close = 2.0;
  CHECK_FALSE(validate_grasp(outside, fx.scene).empty());
}

TEST_CASE("grasp JSON round trip") {
  const Fixture fx;
  JsonReader reader(false);
  CHECK(grasp_from_json(grasp_to_json(fx.params), reader) == fx.params);
  CHECK(reader.take_errors().empty());
}

}  // TEST_SUITE
