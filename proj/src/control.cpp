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

#include "simbridge/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace simbridge {

std::map<std::size_t, double> posture_accel(const PostureTask& task, const SceneModel& scene,
                                            std::span<const ReferenceSample> refs) {
  std::map<std::size_t, double> accel;
  const double kd = 2.0 * task.damping_ratio * std::sqrt(task.stiffness);
  for (const auto& [joint, target] : task.targets) {
    const std::size_t i = scene.require_joint(joint);
    const ReferenceSample& ref = refs[i];
    accel[i] = task.stiffness * (target - ref.q_ref) - kd * ref.qd_ref;
  }
  return accel;
}

ReferenceSample double_integrate(const ReferenceSample& current, double accel, double dt) {
  ReferenceSample out;
  out.qd_ref = current.qd_ref + dt * accel;
  out.q_ref = current.q_ref + dt * out.qd_ref;
  return out;
}

namespace {

ReferenceSample clamp_sample(ReferenceSample s, const JointBounds& b) {
  s.qd_ref = std::clamp(s.qd_ref, -b.vel, b.vel);
  if (s.q_ref > b.pos.max) {
    s.q_ref = b.pos.max;
    s.qd_ref = std::min(s.qd_ref, 0.0);
  } else if (s.q_ref < b.pos.min) {
    s.q_ref = b.pos.min;
    s.qd_ref = std::max(s.qd_ref, 0.0);
  }
  return s;
}

}  // namespace

ControlOutput clamp_to_bounds(ControlOutput out, const SceneModel& scene) {
  const auto& joints = scene.joints();
  if (out.refs.size() != joints.size()) {
    throw std::invalid_argument("control output does not cover the scene");
  }
  for (std::size_t i = 0; i < joints.size(); ++i) {
    out.refs[i] = clamp_sample(out.refs[i], joints[i].bounds);
  }
  return out;
}

ControlOutput controller_tick(const SensorFrame& frame, std::span<const PostureTask> tasks,
                              const ControlOutput& current, const SceneModel& scene,
                              double dt_ctrl) {
  const auto& joints = scene.joints();
  if (current.refs.size() != joints.size() || frame.joints.size() != joints.size()) {
    throw std::invalid_argument("controller state does not cover the scene");
  }
  if (!(dt_ctrl > 0.0)) throw std::invalid_argument("dt_ctrl must be positive");

  std::vector<double> weighted(joints.size(), 0.0);
  std::vector<double> weights(joints.size(), 0.0);
  for (const PostureTask& task : tasks) {
    for (const auto& [i, a] : posture_accel(task, scene, current.refs)) {
      weighted[i] += task.weight * a;
      weights[i] += task.weight;
    }
  }

  ControlOutput next = current;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (joints[i].actuator.passive()) {
      next.refs[i] = {frame.joints[i].q, frame.joints[i].qd};
      continue;
    }
    const double accel = weights[i] > 0.0 ? weighted[i] / weights[i] : 0.0;
    const JointBounds& b = joints[i].bounds;
    // Velocity is saturated before it is integrated so that a tick never
    // moves a reference further than vel * dt_ctrl.
    ReferenceSample s = current.refs[i];
    s.qd_ref = std::clamp(s.qd_ref + dt_ctrl * accel, -b.vel, b.vel);
    s.q_ref = s.q_ref + dt_ctrl * s.qd_ref;
    next.refs[i] = clamp_sample(s, b);
  }
  return next;
}

ControlOutput hold_posture(std::span<const double> posture) {
  ControlOutput out;
  out.refs.reserve(posture.size());
  for (double q : posture) out.refs.push_back({q, 0.0});
  return out;
}

}  // namespace simbridge
