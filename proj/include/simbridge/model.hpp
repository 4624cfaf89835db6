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

#ifndef SIMBRIDGE_MODEL_HPP_
#define SIMBRIDGE_MODEL_HPP_

// Robot and object descriptions.
//
// A description carries two views of the same robot: the simulation-side
// joint model (JointSpec, whose limits the physics enforces strictly) and the
// controller-side ControlBounds, which must be contained in the former. Both
// live in one JSON document so a single file describes a robot completely.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace simbridge {

using Json = nlohmann::json;

enum class JointKind { kRevolute, kPrismatic };

struct Limits {
  double min = 0.0;
  double max = 0.0;

  bool contains(double x) const { return x >= min && x <= max; }
  bool operator==(const Limits&) const = default;
};

// One-DoF joint. Units are rad / N·m for revolute joints and m / N for
// prismatic joints; "inertia" is then a mass.
struct JointSpec {
  std::string name;
  JointKind kind = JointKind::kRevolute;
  double inertia = 1.0;
  double rotor_inertia = 0.0;
  double gear = 1.0;
  double damping = 0.0;
  double coulomb_friction = 0.0;
  double stiction = 0.0;
  double gravity_amp = 0.0;  // amplitude of the -gravity_amp*sin(q) torque
  Limits pos_limits{-3.14159, 3.14159};
  double vel_limit = 10.0;
  double torque_limit = 100.0;  // joint side, after gear scaling

  bool operator==(const JointSpec&) const = default;
};

// Motor-side PD gains.
struct ServoGains {
  double kp = 0.0;
  double kd = 0.0;

  bool operator==(const ServoGains&) const = default;
};

enum class ActuatorKind { kDirectTorque, kPosition, kVelocity, kPdServo, kNone };

struct ActuatorSpec {
  std::string joint;
  ActuatorKind kind = ActuatorKind::kPdServo;
  ServoGains default_gains;

  bool passive() const { return kind == ActuatorKind::kNone; }
  bool operator==(const ActuatorSpec&) const = default;
};

enum class SensorKind { kEncoder, kJointTorque, kImuStub, kGripperForce, kGroundTruth };

struct SensorSpec {
  std::string name;
  SensorKind kind = SensorKind::kEncoder;
  std::string target;  // joint or object name
  double noise_std = 0.0;
  double quantization = 0.0;  // 0 disables

  bool operator==(const SensorSpec&) const = default;
};

struct RobotDescription {
  std::string name;
  std::vector<JointSpec> joints;
  std::vector<ActuatorSpec> actuators;
  std::vector<SensorSpec> sensors;
  std::map<std::string, double> default_posture;
  // Parsed and carried, but unused: the joint-space engine has no geometry.
  std::vector<std::pair<std::string, std::string>> collision_pairs;

  const JointSpec* find_joint(std::string_view joint) const;
  // Actuator attached to `joint`; joints without one are passive.
  ActuatorSpec actuator_for(std::string_view joint) const;

  bool operator==(const RobotDescription&) const = default;
};

struct JointBounds {
  Limits pos;
  double vel = 0.0;
  double torque = 0.0;

  bool operator==(const JointBounds&) const = default;
};

// Controller-side conservative bounds, keyed by joint name.
struct ControlBounds {
  std::map<std::string, JointBounds> joints;

  bool operator==(const ControlBounds&) const = default;
};

// Bounds equal to the simulation limits of every joint.
ControlBounds bounds_from_limits(const RobotDescription& desc);

struct ObjectSpec {
  std::string name;
  double mass = 1.0;
  double rest_height = 0.0;
  double table_height = 0.0;

  bool operator==(const ObjectSpec&) const = default;
};

// Everything one description document holds.
struct DescriptionDocument {
  RobotDescription robot;
  ControlBounds bounds;
  std::vector<ObjectSpec> objects;
  std::vector<std::string> warnings;  // lenient mode only

  bool operator==(const DescriptionDocument& other) const {
    return robot == other.robot && bounds == other.bounds && objects == other.objects;
  }
};

struct ParseOptions {
  // Unknown keys become warnings instead of errors.
  bool lenient = false;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// JSON text to a document; syntax errors become a position-annotated ParseError.
Json parse_json(std::string_view text);

DescriptionDocument parse_description_document(std::string_view text,
                                               const ParseOptions& options = {});
RobotDescription parse_description(std::string_view text, const ParseOptions& options = {});

// Same, from an already-parsed JSON value.
DescriptionDocument description_from_json(const Json& doc, const ParseOptions& options = {});
Json description_to_json(const DescriptionDocument& doc);
std::string serialize_description(const DescriptionDocument& doc);

// Structural invariants of a description; empty when valid. Sensor targets may
// also name any of `object_names`.
std::vector<std::string> validate_description(const RobotDescription& desc,
                                              const std::vector<std::string>& object_names = {});

// Containment check of controller bounds against simulation limits. Empty
// result means ok. Containment is non-strict.
std::vector<std::string> validate_bounds(const RobotDescription& desc, const ControlBounds& bounds);

// Reflected rotor inertia model: inertia + gear^2 * rotor_inertia.
double effective_inertia(const JointSpec& joint);

// ---------------------------------------------------------------------------
// Scene merging.

inline constexpr char kNameSeparator = '/';

std::string qualify(std::string_view instance, std::string_view name);

struct SceneEntry {
  std::string instance;
  RobotDescription desc;
  ControlBounds bounds;

  bool operator==(const SceneEntry&) const = default;
};

// Flattened per-joint view of a merged scene. Index order is entry order,
// then joint order within the entry.
struct SceneJoint {
  std::string qualified;
  std::size_t entry = 0;
  JointSpec spec;
  ActuatorSpec actuator;
  JointBounds bounds;
  double default_q = 0.0;
  double inertia_eff = 1.0;

  bool operator==(const SceneJoint&) const = default;
};

struct SceneSensor {
  std::string qualified;
  SensorSpec spec;
  std::optional<std::size_t> joint;   // resolved target joint
  std::optional<std::size_t> object;  // resolved target object

  bool operator==(const SceneSensor&) const = default;
};

class MergeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Merged multi-robot scene. Immutable once built by merge_scene.
class SceneModel {
 public:
  SceneModel() = default;

  const std::vector<SceneEntry>& entries() const { return entries_; }
  const std::vector<ObjectSpec>& objects() const { return objects_; }
  const std::vector<SceneJoint>& joints() const { return joints_; }
  const std::vector<SceneSensor>& sensors() const { return sensors_; }

  std::optional<std::size_t> joint_index(std::string_view qualified) const;
  std::optional<std::size_t> object_index(std::string_view name) const;
  std::optional<std::size_t> sensor_index(std::string_view qualified) const;

  // Joint index or a std::out_of_range naming the joint.
  std::size_t require_joint(std::string_view qualified) const;

  std::vector<std::string> joint_names() const;
  std::vector<double> default_posture() const;

  bool operator==(const SceneModel& other) const {
    return entries_ == other.entries_ && objects_ == other.objects_;
  }

 private:
  friend SceneModel merge_scene(std::vector<SceneEntry> entries, std::vector<ObjectSpec> objects);

  std::vector<SceneEntry> entries_;
  std::vector<ObjectSpec> objects_;
  std::vector<SceneJoint> joints_;
  std::vector<SceneSensor> sensors_;
  std::map<std::string, std::size_t, std::less<>> joint_lookup_;
  std::map<std::string, std::size_t, std::less<>> object_lookup_;
  std::map<std::string, std::size_t, std::less<>> sensor_lookup_;
};

// Merges robot entries into one scene, qualifying joint and sensor names as
// "instance/name". Throws MergeError on duplicate or malformed instance names
// and duplicate object names, ValidationError when an entry is invalid.
SceneModel merge_scene(std::vector<SceneEntry> entries, std::vector<ObjectSpec> objects);

std::string_view to_string(JointKind kind);
std::string_view to_string(ActuatorKind kind);
std::string_view to_string(SensorKind kind);

}  // namespace simbridge

#endif  // SIMBRIDGE_MODEL_HPP_
