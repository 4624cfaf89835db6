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


#include <random>

#include <doctest.h>

#include "simbridge/actuation.hpp"

using namespace simbridge;

TEST_SUITE("actuation") {

TEST_CASE("pd torque evaluation") {
  CHECK(pd_torque({100, 10}, {0.3, -0.2}, 0.3, -0.2) == 0.0);
  CHECK(pd_torque({100, 10}, {0.1, 0.0}, 0.0, 0.0) == doctest::Approx(10.0));
  CHECK(pd_torque({0, 10}, {0.0, -0.5}, 0.0, 0.0) == doctest::Approx(-5.0));
}

TEST_CASE("position and velocity actuators compose into the pd servo") {
  CHECK(position_torque(50, 0.2, 0.0) == doctest::Approx(10.0));
  CHECK(velocity_torque(7.0, 1.25, 1.25) == 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n = 0; n < 1000; ++n) {
    const ServoGains g{std::abs(u(rng)) * 20, std::abs(u(rng))};
    const ReferenceSample ref{u(rng), u(rng)};
    const double q = u(rng);
    const double qd = u(rng);
    CHECK(pd_torque(g, ref, q, qd) ==
          position_torque(g.kp, ref.q_ref, q) + velocity_torque(g.kd, ref.qd_ref, qd));
  }
}

TEST_CASE("pd torque is strictly increasing in kp for a positive error") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  for (int n = 0; n < 500; ++n) {
    const double e = u(rng);
    const double kp = 100 * u(rng);
    const ReferenceSample ref{e, 0.3};
    CHECK(pd_torque({kp + u(rng), 2.0}, ref, 0.0, 0.3) > pd_torque({kp, 2.0}, ref, 0.0, 0.3));
  }
}

TEST_CASE("linear interpolation") {
  RefInterpolator itp{{0.0, 0.0}, {1.0, 2.0}, 5};
  const ReferenceSample s = interpolate(itp, 2);
  CHECK(s.q_ref == doctest::Approx(0.4));
  CHECK(s.qd_ref == doctest::Approx(0.8));
  CHECK_THROWS_AS(interpolate(itp, 0), std::out_of_range);
  CHECK_THROWS_AS(interpolate(itp, 6), std::out_of_range);

  RefInterpolator one{{0.5, 0.1}, {0.7, -0.3}, 1};
  CHECK(interpolate(one, 1) == one.next);
}

TEST_CASE("the last substep reproduces the next sample bit for bit") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 2000; ++n) {
    const int k = 1 + static_cast<int>(rng() % 20);
    for (auto mode : {InterpolationMode::kLinear, InterpolationMode::kHoldVelocity,
                      InterpolationMode::kZeroOrderHold}) {
      RefInterpolator itp{{u(rng), u(rng)}, {u(rng), u(rng)}, k, mode};
      REQUIRE(interpolate(itp, k) == itp.next);
    }
  }
}

TEST_CASE("references are continuous across controller ticks") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const int K = 5;
  ReferenceSample prev{u(rng), u(rng)};
  ReferenceSample last_end = prev;
  for (int tick = 0; tick < 1000; ++tick) {
    const ReferenceSample next{u(rng), u(rng)};
    RefInterpolator itp{prev, next, K};
    CHECK(boundary_sample(itp) == last_end);
    double lo = std::min(prev.q_ref, next.q_ref);
    double hi = std::max(prev.q_ref, next.q_ref);
    for (int k = 1; k <= K; ++k) {
      const double q = interpolate(itp, k).q_ref;
      CHECK(q >= lo - 1e-12);
      CHECK(q <= hi + 1e-12);
    }
    last_end = interpolate(itp, K);
    prev = next;
  }
}

TEST_CASE("alternative interpolation modes") {
  RefInterpolator hold{{0.0, 0.0}, {1.0, 2.0}, 4, InterpolationMode::kHoldVelocity};
  CHECK(interpolate(hold, 1).q_ref == doctest::Approx(0.25));
  CHECK(interpolate(hold, 1).qd_ref == 2.0);
  RefInterpolator zoh{{0.0, 0.0}, {1.0, 2.0}, 4, InterpolationMode::kZeroOrderHold};
  CHECK(interpolate(zoh, 1) == zoh.next);
}

TEST_CASE("command dispatch per actuator kind") {
  const ServoGains g{100, 10};
  const ReferenceSample ref{0.3, 0.1};
  CHECK_FALSE(command_for({"j", ActuatorKind::kNone, g}, g, ref, 0.0, 0.0).has_value());
  CHECK(command_for({"j", ActuatorKind::kPdServo, g}, g, ref, 0.1, 0.0) == pd_torque(g, ref, 0.1, 0.0));
  CHECK(command_for({"j", ActuatorKind::kDirectTorque, g}, g, ref, 0.1, 0.0) == 0.3);
  CHECK(command_for({"j", ActuatorKind::kPosition, g}, g, ref, 0.1, 0.0) == position_torque(100, 0.3, 0.1));
  CHECK(command_for({"j", ActuatorKind::kVelocity, g}, g, ref, 0.1, 0.0) == velocity_torque(10, 0.1, 0.0));
}

}  // TEST_SUITE
