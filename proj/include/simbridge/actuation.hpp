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

#ifndef SIMBRIDGE_ACTUATION_HPP_
#define SIMBRIDGE_ACTUATION_HPP_

#include <optional>

#include "simbridge/model.hpp"

namespace simbridge {

struct ReferenceSample {
  double q_ref = 0.0;
  double qd_ref = 0.0;

  bool operator==(const ReferenceSample&) const = default;
};

enum class InterpolationMode {
  kLinear,         // blend both q_ref and qd_ref
  kHoldVelocity,   // blend q_ref, hold qd_ref at the new sample
  kZeroOrderHold,  // jump to the new sample on the first substep
};

// Upsamples one controller-rate reference step into `substeps` PD-rate
// samples. Substep k = 1..substeps lies at fraction k/substeps of the way from
// `prev` to `next`.
struct RefInterpolator {
  ReferenceSample prev;
  ReferenceSample next;
  int substeps = 1;
  InterpolationMode mode = InterpolationMode::kLinear;
};

// Throws std::out_of_range unless 1 <= k <= substeps. k == substeps returns
// `next` bit-exactly.
ReferenceSample interpolate(const RefInterpolator& itp, int k);

// The k = 0 sample, i.e. `prev`. Equal to the previous interpolator's final
// sample when the controller hands over its last reference.
inline ReferenceSample boundary_sample(const RefInterpolator& itp) { return itp.prev; }

// All torques below are motor side; physics applies the gear ratio.
inline double position_torque(double kp, double q_ref, double q) { return kp * (q_ref - q); }
inline double velocity_torque(double kd, double qd_ref, double qd) { return kd * (qd_ref - qd); }

inline double pd_torque(const ServoGains& g, const ReferenceSample& ref, double q, double qd) {
  return position_torque(g.kp, ref.q_ref, q) + velocity_torque(g.kd, ref.qd_ref, qd);
}

// Motor command for one actuator. Passive joints produce none; direct-torque
// actuators reinterpret ref.q_ref as the motor torque.
std::optional<double> command_for(const ActuatorSpec& actuator, const ServoGains& gains,
                                  const ReferenceSample& ref, double q, double qd);

}  // namespace simbridge

#endif  // SIMBRIDGE_ACTUATION_HPP_
