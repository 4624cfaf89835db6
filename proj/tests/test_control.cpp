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


#include <cmath>
#include <random>

#include <doctest.h>

#include "simbridge/control.hpp"
#include "test_support.hpp"

using namespace simbridge;
using namespace simbridge::testing;

namespace {

constexpr double kDtCtrl = 0.005;

SceneModel bounded_scene(double lo, double hi, double vel) {
  JointSpec a = free_joint("a");
  JointSpec b = free_joint("b");
  RobotDescription d = robot("r", {a, b}, {servo("a", 10, 1), servo("b", 10, 1)});
  ControlBounds bounds = bounds_from_limits(d);
  for (auto& [name, jb] : bounds.joints) {
    jb.pos = {lo, hi};
    jb.vel = vel;
  }
  return merge_scene({SceneEntry{"r", d, bounds}}, {});
}

SensorFrame frame_for(const SceneModel& scene) {
  SensorFrame f;
  f.joints.resize(scene.joints().size());
  return f;
}

}  // namespace

TEST_SUITE("control") {

TEST_CASE("posture acceleration") {
  const SceneModel scene = bounded_scene(-1, 1, 5);
  const std::vector<ReferenceSample> refs{{0.2, 0.0}, {0.0, 0.0}};
  CHECK(posture_accel(PostureTask{{{"r/a", 0.2}}}, scene, refs).at(0) == 0.0);

  const auto acc = posture_accel(PostureTask{{{"r/b", 0.1}}, 100.0, 1.0}, scene, refs);
  CHECK(acc.size() == 1);
  CHECK(acc.at(1) == doctest::Approx(10.0));

  const std::vector<ReferenceSample> moving{{0.0, 0.0}, {0.0, 0.5}};
  // Oracle: -2 zeta sqrt(k) qd_ref.
  CHECK(posture_accel(PostureTask{{{"r/b", 0.0}}, 100.0, 1.0}, scene, moving).at(1) ==
        doctest::Approx(-2.0 * 10.0 * 0.5));

  CHECK_THROWS_AS(posture_accel(PostureTask{{{"r/zz", 0.0}}}, scene, refs), std::out_of_range);
}

TEST_CASE("double integration") {
  CHECK(double_integrate({0.3, 0.0}, 0.0, kDtCtrl) == ReferenceSample{0.3, 0.0});
  const ReferenceSample s = double_integrate({0.0, 0.0}, 10.0, kDtCtrl);
  CHECK(s.qd_ref == doctest::Approx(0.05));
  CHECK(s.q_ref == doctest::Approx(0.00025));
}

TEST_CASE("constant acceleration tracks the quadratic") {
  const double a = 3.0;
  ReferenceSample s;
  const int n = 200;
  for (int i = 0; i < n; ++i) s = double_integrate(s, a, kDtCtrl);
  const double t = n * kDtCtrl;
  const double analytic = 0.5 * a * t * t;
  // Semi-implicit Euler leads the parabola by exactly a*dt*t/2.
  CHECK(s.q_ref == doctest::Approx(analytic + 0.5 * a * kDtCtrl * t).epsilon(1e-9));
  CHECK(std::abs(s.q_ref - analytic) <= a * kDtCtrl * t);
  CHECK(s.qd_ref == doctest::Approx(a * t));
}

TEST_CASE("clamping to bounds") {
  const SceneModel scene = bounded_scene(-1.0, 1.0, 2.0);
  const ControlOutput in{{{0.5, 0.3}, {-0.2, -1.0}}};
  CHECK(clamp_to_bounds(in, scene) == in);

  const ControlOutput above = clamp_to_bounds(ControlOutput{{{1.5, 0.7}, {-1.5, 0.7}}}, scene);
  CHECK(above.refs[0] == ReferenceSample{1.0, 0.0});
  CHECK(above.refs[1] == ReferenceSample{-1.0, 0.7});

  const ControlOutput fast = clamp_to_bounds(ControlOutput{{{0.0, -4.0}, {0.0, 4.0}}}, scene);
  CHECK(fast.refs[0].qd_ref == -2.0);
  CHECK(fast.refs[1].qd_ref == 2.0);
}

TEST_CASE("no tasks hold the references") {
  const SceneModel scene = bounded_scene(-1, 1, 5);
  const ControlOutput current{{{0.4, 0.0}, {-0.3, 0.0}}};
  CHECK(controller_tick(frame_for(scene), {}, current, scene, kDtCtrl) == current);
}

TEST_CASE("a task at the current posture is a fixed point") {
  const SceneModel scene = bounded_scene(-1, 1, 5);
  const ControlOutput current{{{0.4, 0.0}, {-0.3, 0.0}}};
  const std::vector<PostureTask> tasks{PostureTask{{{"r/a", 0.4}, {"r/b", -0.3}}}};
  CHECK(controller_tick(frame_for(scene), tasks, current, scene, kDtCtrl) == current);
}

TEST_CASE("critically damped step response") {
  const SceneModel scene = bounded_scene(-1, 1, 5);
  const std::vector<PostureTask> tasks{PostureTask{{{"r/a", 0.5}}, 100.0, 1.0}};
  ControlOutput out = hold_posture(std::vector<double>{0.0, 0.0});
  double peak = 0.0;
  double prev = 0.0;
  std::optional<double> settled;
  for (int tick = 1; tick <= 400; ++tick) {
    out = controller_tick(frame_for(scene), tasks, out, scene, kDtCtrl);
    const double q = out.refs[0].q_ref;
    CHECK(q >= prev);
    prev = q;
    peak = std::max(peak, q);
    if (!settled && std::abs(0.5 - q) < 1e-3) settled = tick * kDtCtrl;
  }
  REQUIRE(settled.has_value());
  CHECK(*settled <= 2.0);
  CHECK((peak - 0.5) / 0.5 < 0.01);
  CHECK(out.refs[1] == ReferenceSample{0.0, 0.0});
}

TEST_CASE("overlapping tasks blend by weight") {
  const SceneModel scene = bounded_scene(-1, 1, 5);
  const ControlOutput start = hold_posture(std::vector<double>{0.0, 0.0});
  const std::vector<PostureTask> tasks{PostureTask{{{"r/a", 0.4}}, 100.0, 1.0, 3.0},
                                       PostureTask{{{"r/a", -0.4}}, 100.0, 1.0, 1.0}};
  const ControlOutput out = controller_tick(frame_for(scene), tasks, start, scene, kDtCtrl);
  // Oracle: weighted mean acceleration (3*40 - 40) / 4 = 20.
  CHECK(out.refs[0].qd_ref == doctest::Approx(20.0 * kDtCtrl));
}

TEST_CASE("references stay bounded and velocity-limited") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double lo = -0.2 - u(rng);
    const double hi = 0.2 + u(rng);
    const double vel = 0.1 + 3.0 * u(rng);
    const SceneModel scene = bounded_scene(lo, hi, vel);
    ControlOutput out = hold_posture(std::vector<double>{0.0, 0.0});
    for (int tick = 0; tick < 300; ++tick) {
      // Targets may lie outside the bounds; the output must not.
      const std::vector<PostureTask> tasks{
          PostureTask{{{"r/a", 4.0 * (u(rng) - 0.5)}, {"r/b", 4.0 * (u(rng) - 0.5)}}, 400.0 * u(rng) + 1.0,
                      u(rng) * 2.0}};
      const ControlOutput next = controller_tick(frame_for(scene), tasks, out, scene, kDtCtrl);
      for (std::size_t i = 0; i < 2; ++i) {
        REQUIRE(next.refs[i].q_ref >= lo);
        REQUIRE(next.refs[i].q_ref <= hi);
        REQUIRE(std::abs(next.refs[i].qd_ref) <= vel);
        REQUIRE(std::abs(next.refs[i].q_ref - out.refs[i].q_ref) <= vel * kDtCtrl + 1e-12);
      }
      out = next;
    }
  }
}

TEST_CASE("passive joints follow the measurement") {
  JointSpec a = free_joint("a");
  JointSpec p = free_joint("p");
  const SceneModel scene = single_scene(robot("r", {a, p}, {servo("a", 1, 0), passive("p")}));
  SensorFrame f = frame_for(scene);
  f.joints[1] = {0.7, -0.1, 0.0};
  const ControlOutput out = controller_tick(f, {}, hold_posture(std::vector<double>{0, 0}), scene, kDtCtrl);
  CHECK(out.refs[1] == ReferenceSample{0.7, -0.1});
}

}  // TEST_SUITE
