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

#include "simbridge/actuation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace simbridge {

ReferenceSample interpolate(const RefInterpolator& itp, int k) {
  if (itp.substeps < 1 || k < 1 || k > itp.substeps) {
    throw std::out_of_range("substep " + std::to_string(k) + " outside 1.." +
                            std::to_string(itp.substeps));
  }
  // std::lerp is exact at s == 1, which gives the bit-exact endpoint.
  const double s = static_cast<double>(k) / static_cast<double>(itp.substeps);
  switch (itp.mode) {
    case InterpolationMode::kLinear:
      return {std::lerp(itp.prev.q_ref, itp.next.q_ref, s),
              std::lerp(itp.prev.qd_ref, itp.next.qd_ref, s)};
    case InterpolationMode::kHoldVelocity:
      return {std::lerp(itp.prev.q_ref, itp.next.q_ref, s), itp.next.qd_ref};
    case InterpolationMode::kZeroOrderHold:
      return itp.next;
  }
  return itp.next;
}

std::optional<double> command_for(const ActuatorSpec& actuator, const ServoGains& gains,
                                  const ReferenceSample& ref, double q, double qd) {
  switch (actuator.kind) {
    case ActuatorKind::kNone:
      return std::nullopt;
    case ActuatorKind::kDirectTorque:
      return ref.q_ref;
    case ActuatorKind::kPosition:
      return position_torque(gains.kp, ref.q_ref, q);
    case ActuatorKind::kVelocity:
      return velocity_torque(gains.kd, ref.qd_ref, qd);
    case ActuatorKind::kPdServo:
      return pd_torque(gains, ref, q, qd);
  }
  return std::nullopt;
}

}  // namespace simbridge
