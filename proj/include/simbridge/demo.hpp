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

#ifndef SIMBRIDGE_DEMO_HPP_
#define SIMBRIDGE_DEMO_HPP_

// Built-in pick-and-lift demo: a shoulder/elbow arm on a vertical lift axis
// with a one-DoF gripper, and a box resting on a table.
//
//   Initial -> PreGrasp -> OpenGripper -> Reach -> CloseGripper -> Lift -> Done
//
// scenarios/grasp.json is this document written out by `simbridge demo-scenario`.

#include "simbridge/scenario.hpp"

namespace simbridge {

inline constexpr const char* kDemoInstance = "arm";

Json grasp_scenario_json();
Scenario build_grasp_scenario();

}  // namespace simbridge

#endif  // SIMBRIDGE_DEMO_HPP_
