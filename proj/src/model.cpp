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

#include "simbridge/model.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>
#include <sstream>

#include "simbridge/json_reader.hpp"

namespace simbridge {

namespace {

constexpr std::pair<JointKind, std::string_view> kJointKinds[] = {
    {JointKind::kRevolute, "revolute"},
    {JointKind::kPrismatic, "prismatic"},
};

constexpr std::pair<ActuatorKind, std::string_view> kActuatorKinds[] = {
    {ActuatorKind::kDirectTorque, "direct_torque"}, {ActuatorKind::kPosition, "position"},
    {ActuatorKind::kVelocity, "velocity"},          {ActuatorKind::kPdServo, "pd_servo"},
    {ActuatorKind::kNone, "none"},
};

constexpr std::pair<SensorKind, std::string_view> kSensorKinds[] = {
    {SensorKind::kEncoder, "encoder"},           {SensorKind::kJointTorque, "joint_torque"},
    {SensorKind::kImuStub, "imu_stub"},          {SensorKind::kGripperForce, "gripper_force"},
    {SensorKind::kGroundTruth, "ground_truth"},
};

template <typename E, std::size_t N>
std::string_view enum_name(const std::pair<E, std::string_view> (&table)[N], E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> enum_from(const std::pair<E, std::string_view> (&table)[N], std::string_view s) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
E read_enum(JsonReader& r, const Json& obj, std::string_view key, E fallback,
            const std::pair<E, std::string_view> (&table)[N]) {
  const std::string text = r.optional_string(obj, key, std::string(enum_name(table, fallback)));
  if (auto e = enum_from(table, text)) return *e;
  r.fail(key, "unknown value \"" + text + "\"");
  return fallback;
}

Limits read_limits(JsonReader& r, const Json& obj, std::string_view key) {
  Limits limits;
  const Json* v = r.field(obj, key, /*required=*/true);
  if (v == nullptr) return limits;
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
    r.fail(key, "expected [min, max]");
    return limits;
  }
  limits.min = (*v)[0].get<double>();
  limits.max = (*v)[1].get<double>();
  return limits;
}

JointSpec read_joint(JsonReader& r, const Json& obj) {
  r.expect_keys(obj, {"name", "kind", "inertia", "rotor_inertia", "gear", "damping",
                      "coulomb_friction", "stiction", "gravity_amp", "pos_limits", "vel_limit",
                      "torque_limit"});
  JointSpec j;
  j.name = r.required_string(obj, "name");
  j.kind = read_enum(r, obj, "kind", JointKind::kRevolute, kJointKinds);
  j.inertia = r.required_number(obj, "inertia");
  j.rotor_inertia = r.optional_number(obj, "rotor_inertia", 0.0);
  j.gear = r.optional_number(obj, "gear", 1.0);
  j.damping = r.optional_number(obj, "damping", 0.0);
  j.coulomb_friction = r.optional_number(obj, "coulomb_friction", 0.0);
  j.stiction = r.optional_number(obj, "stiction", j.coulomb_friction);
  j.gravity_amp = r.optional_number(obj, "gravity_amp", 0.0);
  j.pos_limits = read_limits(r, obj, "pos_limits");
  j.vel_limit = r.required_number(obj, "vel_limit");
  j.torque_limit = r.required_number(obj, "torque_limit");
  return j;
}

ActuatorSpec read_actuator(JsonReader& r, const Json& obj) {
  r.expect_keys(obj, {"joint", "kind", "gains"});
  ActuatorSpec a;
  a.joint = r.required_string(obj, "joint");
  a.kind = read_enum(r, obj, "kind", ActuatorKind::kPdServo, kActuatorKinds);
  if (const Json* g = r.field(obj, "gains", false)) {
    auto scope = r.scope("gains");
    if (r.check_object(*g)) {
      r.expect_keys(*g, {"kp", "kd"});
      a.default_gains.kp = r.optional_number(*g, "kp", 0.0);
      a.default_gains.kd = r.optional_number(*g, "kd", 0.0);
    }
  }
  return a;
}

SensorSpec read_sensor(JsonReader& r, const Json& obj) {
  r.expect_keys(obj, {"name", "kind", "target", "noise_std", "quantization"});
  SensorSpec s;
  s.name = r.required_string(obj, "name");
  s.kind = read_enum(r, obj, "kind", SensorKind::kEncoder, kSensorKinds);
  s.target = r.required_string(obj, "target");
  s.noise_std = r.optional_number(obj, "noise_std", 0.0);
  s.quantization = r.optional_number(obj, "quantization", 0.0);
  return s;
}

ObjectSpec read_object(JsonReader& r, const Json& obj) {
  r.expect_keys(obj, {"name", "mass", "rest_height", "table_height"});
  ObjectSpec o;
  o.name = r.required_string(obj, "name");
  o.mass = r.required_number(obj, "mass");
  o.table_height = r.optional_number(obj, "table_height", 0.0);
  o.rest_height = r.optional_number(obj, "rest_height", o.table_height);
  return o;
}

template <typename T, typename F>
std::vector<T> read_array(JsonReader& r, const Json& doc, std::string_view key, F&& read_one) {
  std::vector<T> out;
  const Json* arr = r.field(doc, key, false);
  if (arr == nullptr) return out;
  if (!arr->is_array()) {
    r.fail(key, "expected an array");
    return out;
  }
  for (std::size_t i = 0; i < arr->size(); ++i) {
    auto scope = r.scope(std::string(key) + "[" + std::to_string(i) + "]");
    if (r.check_object((*arr)[i])) out.push_back(read_one(r, (*arr)[i]));
  }
  return out;
}

bool finite(double x) { return std::isfinite(x); }

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

std::string_view to_string(JointKind kind) { return enum_name(kJointKinds, kind); }
std::string_view to_string(ActuatorKind kind) { return enum_name(kActuatorKinds, kind); }
std::string_view to_string(SensorKind kind) { return enum_name(kSensorKinds, kind); }

const JointSpec* RobotDescription::find_joint(std::string_view joint) const {
  auto it = std::find_if(joints.begin(), joints.end(),
                         [&](const JointSpec& j) { return j.name == joint; });
  return it == joints.end() ? nullptr : &*it;
}

ActuatorSpec RobotDescription::actuator_for(std::string_view joint) const {
  for (const auto& a : actuators) {
    if (a.joint == joint) return a;
  }
  return ActuatorSpec{std::string(joint), ActuatorKind::kNone, {}};
}

ControlBounds bounds_from_limits(const RobotDescription& desc) {
  ControlBounds bounds;
  for (const auto& j : desc.joints) {
    bounds.joints[j.name] = JointBounds{j.pos_limits, j.vel_limit, j.torque_limit};
  }
  return bounds;
}

double effective_inertia(const JointSpec& joint) {
  return joint.inertia + joint.gear * joint.gear * joint.rotor_inertia;
}

std::vector<std::string> validate_description(const RobotDescription& desc,
                                              const std::vector<std::string>& object_names) {
  std::vector<std::string> errors;
  if (desc.name.empty()) errors.push_back("robot name is empty");

  std::set<std::string> names;
  for (const auto& j : desc.joints) {
    const std::string where = "joint '" + j.name + "'";
    if (j.name.empty()) errors.push_back("joint with empty name");
    if (j.name.find(kNameSeparator) != std::string::npos) {
      errors.push_back(where + ": name may not contain '/'");
    }
    if (!names.insert(j.name).second) errors.push_back(where + ": duplicate joint name");
    for (double v : {j.inertia, j.rotor_inertia, j.gear, j.damping, j.coulomb_friction, j.stiction,
                     j.gravity_amp, j.pos_limits.min, j.pos_limits.max, j.vel_limit,
                     j.torque_limit}) {
      if (!finite(v)) {
        errors.push_back(where + ": non-finite parameter");
        break;
      }
    }
    if (!(j.inertia > 0)) errors.push_back(where + ": inertia must be > 0");
    if (j.rotor_inertia < 0) errors.push_back(where + ": rotor_inertia must be >= 0");
    if (!(j.gear > 0)) errors.push_back(where + ": gear must be > 0");
    if (j.damping < 0) errors.push_back(where + ": damping must be >= 0");
    if (j.coulomb_friction < 0) errors.push_back(where + ": coulomb_friction must be >= 0");
    if (j.stiction < j.coulomb_friction) {
      errors.push_back(where + ": stiction must be >= coulomb_friction");
    }
    if (j.gravity_amp < 0) errors.push_back(where + ": gravity_amp must be >= 0");
    if (!(j.pos_limits.min < j.pos_limits.max)) {
      errors.push_back(where + ": pos_limits min must be < max");
    }
    if (!(j.vel_limit > 0)) errors.push_back(where + ": vel_limit must be > 0");
    if (!(j.torque_limit > 0)) errors.push_back(where + ": torque_limit must be > 0");
  }

  std::set<std::string> actuated;
  for (const auto& a : desc.actuators) {
    if (desc.find_joint(a.joint) == nullptr) {
      errors.push_back("actuator targets unknown joint \"" + a.joint + "\"");
      continue;
    }
    if (!actuated.insert(a.joint).second) {
      errors.push_back("joint '" + a.joint + "' has more than one actuator");
    }
    const auto& g = a.default_gains;
    if (!finite(g.kp) || !finite(g.kd) || g.kp < 0 || g.kd < 0) {
      errors.push_back("actuator on '" + a.joint + "': gains must be finite and >= 0");
    }
  }

  std::set<std::string> sensor_names;
  for (const auto& s : desc.sensors) {
    if (!sensor_names.insert(s.name).second) {
      errors.push_back("duplicate sensor name \"" + s.name + "\"");
    }
    const bool is_object =
        std::find(object_names.begin(), object_names.end(), s.target) != object_names.end();
    if (desc.find_joint(s.target) == nullptr && !is_object) {
      errors.push_back("sensor \"" + s.name + "\" targets unknown joint or object \"" + s.target +
                       "\"");
    }
    if (!(s.noise_std >= 0) || !(s.quantization >= 0)) {
      errors.push_back("sensor \"" + s.name + "\": noise_std and quantization must be >= 0");
    }
  }

  for (const auto& [joint, q] : desc.default_posture) {
    const JointSpec* j = desc.find_joint(joint);
    if (j == nullptr) {
      errors.push_back("default_posture names unknown joint \"" + joint + "\"");
    } else if (!j->pos_limits.contains(q)) {
      errors.push_back("default_posture for '" + joint + "' is outside pos_limits");
    }
  }
  for (const auto& [a, b] : desc.collision_pairs) {
    if (desc.find_joint(a) == nullptr || desc.find_joint(b) == nullptr) {
      errors.push_back("collision pair (" + a + ", " + b + ") names an unknown joint");
    }
  }
  return errors;
}

std::vector<std::string> validate_bounds(const RobotDescription& desc, const ControlBounds& bounds) {
  std::vector<std::string> errors;
  for (const auto& j : desc.joints) {
    auto it = bounds.joints.find(j.name);
    if (it == bounds.joints.end()) {
      if (!desc.actuator_for(j.name).passive()) {
        errors.push_back("unbounded joint '" + j.name + "'");
      }
      continue;
    }
    const JointBounds& b = it->second;
    const std::string where = "joint '" + j.name + "'";
    if (!(b.pos.min <= b.pos.max)) errors.push_back(where + " pos: bound min exceeds max");
    if (!(b.pos.min >= j.pos_limits.min) || !(b.pos.max <= j.pos_limits.max)) {
      errors.push_back(where + " pos: bound not contained in sim pos_limits");
    }
    if (!(b.vel >= 0) || !(b.vel <= j.vel_limit)) {
      errors.push_back(where + " vel: bound exceeds sim vel_limit");
    }
    if (!(b.torque >= 0) || !(b.torque <= j.torque_limit)) {
      errors.push_back(where + " torque: bound exceeds sim torque_limit");
    }
  }
  for (const auto& [name, b] : bounds.joints) {
    if (desc.find_joint(name) == nullptr) {
      errors.push_back("bounds name unknown joint \"" + name + "\"");
    }
  }
  return errors;
}

DescriptionDocument description_from_json(const Json& doc, const ParseOptions& options) {
  JsonReader r(options.lenient);
  DescriptionDocument out;
  if (!r.check_object(doc)) throw ValidationError(r.take_errors());

  r.expect_keys(doc, {"name", "joints", "actuators", "sensors", "default_posture", "bounds",
                      "objects", "collision_pairs"});
  out.robot.name = r.required_string(doc, "name");
  out.robot.joints = read_array<JointSpec>(r, doc, "joints", read_joint);
  out.robot.actuators = read_array<ActuatorSpec>(r, doc, "actuators", read_actuator);
  out.robot.sensors = read_array<SensorSpec>(r, doc, "sensors", read_sensor);
  out.objects = read_array<ObjectSpec>(r, doc, "objects", read_object);

  if (const Json* posture = r.field(doc, "default_posture", false)) {
    auto scope = r.scope("default_posture");
    if (r.check_object(*posture)) {
      for (const auto& [joint, value] : posture->items()) {
        if (value.is_number()) {
          out.robot.default_posture[joint] = value.get<double>();
        } else {
          r.fail(joint, "expected a number");
        }
      }
    }
  }

  if (const Json* pairs = r.field(doc, "collision_pairs", false)) {
    if (pairs->is_array()) {
      for (const auto& p : *pairs) {
        if (p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string()) {
          out.robot.collision_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        } else {
          r.fail("collision_pairs", "expected [joint, joint] pairs");
        }
      }
    } else {
      r.fail("collision_pairs", "expected an array");
    }
  }

  const Json* bounds = r.field(doc, "bounds", false);
  if (bounds == nullptr) {
    out.bounds = bounds_from_limits(out.robot);
  } else {
    auto scope = r.scope("bounds");
    if (r.check_object(*bounds)) {
      for (const auto& [joint, b] : bounds->items()) {
        auto inner = r.scope(joint);
        if (!r.check_object(b)) continue;
        r.expect_keys(b, {"pos", "vel", "torque"});
        JointBounds jb;
        jb.pos = read_limits(r, b, "pos");
        jb.vel = r.required_number(b, "vel");
        jb.torque = r.required_number(b, "torque");
        out.bounds.joints[joint] = jb;
      }
    }
  }

  std::vector<std::string> problems = r.take_errors();
  if (problems.empty()) {
    std::vector<std::string> object_names;
    for (const auto& o : out.objects) object_names.push_back(o.name);
    problems = validate_description(out.robot, object_names);
    for (auto& e : validate_bounds(out.robot, out.bounds)) problems.push_back(std::move(e));
    for (const auto& o : out.objects) {
      if (!(o.mass > 0) || !finite(o.mass)) problems.push_back("object \"" + o.name + "\": mass must be > 0");
      if (!(o.rest_height >= o.table_height)) {
        problems.push_back("object \"" + o.name + "\": rest_height below table_height");
      }
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  out.warnings = r.take_warnings();
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    // nlohmann prefixes its own location; keep only the reason.
    if (auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(what, line, column);
  } catch (const Json::out_of_range& e) {
    // Number overflow, e.g. 1e999. The library gives no offset, so locate the
    // quoted literal from the message.
    std::string what = e.what();
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    std::size_t offset = 0;
    const auto open = what.find('\'');
    const auto close = open == std::string::npos ? open : what.find('\'', open + 1);
    if (close != std::string::npos) {
      const auto at = text.find(what.substr(open + 1, close - open - 1));
      if (at != std::string_view::npos) offset = at;
    }
    auto [line, column] = line_column(text, offset + 1);
    throw ParseError(what, line, column);
  }
}

DescriptionDocument parse_description_document(std::string_view text, const ParseOptions& options) {
  return description_from_json(parse_json(text), options);
}

RobotDescription parse_description(std::string_view text, const ParseOptions& options) {
  return parse_description_document(text, options).robot;
}

Json description_to_json(const DescriptionDocument& doc) {
  const RobotDescription& robot = doc.robot;
  Json out;
  out["name"] = robot.name;
  out["joints"] = Json::array();
  for (const auto& j : robot.joints) {
    out["joints"].push_back({
        {"name", j.name},
        {"kind", to_string(j.kind)},
        {"inertia", j.inertia},
        {"rotor_inertia", j.rotor_inertia},
        {"gear", j.gear},
        {"damping", j.damping},
        {"coulomb_friction", j.coulomb_friction},
        {"stiction", j.stiction},
        {"gravity_amp", j.gravity_amp},
        {"pos_limits", {j.pos_limits.min, j.pos_limits.max}},
        {"vel_limit", j.vel_limit},
        {"torque_limit", j.torque_limit},
    });
  }
  out["actuators"] = Json::array();
  for (const auto& a : robot.actuators) {
    out["actuators"].push_back({{"joint", a.joint},
                                {"kind", to_string(a.kind)},
                                {"gains", {{"kp", a.default_gains.kp}, {"kd", a.default_gains.kd}}}});
  }
  out["sensors"] = Json::array();
  for (const auto& s : robot.sensors) {
    out["sensors"].push_back({{"name", s.name},
                              {"kind", to_string(s.kind)},
                              {"target", s.target},
                              {"noise_std", s.noise_std},
                              {"quantization", s.quantization}});
  }
  out["default_posture"] = Json::object();
  for (const auto& [joint, q] : robot.default_posture) out["default_posture"][joint] = q;
  out["bounds"] = Json::object();
  for (const auto& [joint, b] : doc.bounds.joints) {
    out["bounds"][joint] = {{"pos", {b.pos.min, b.pos.max}}, {"vel", b.vel}, {"torque", b.torque}};
  }
  out["objects"] = Json::array();
  for (const auto& o : doc.objects) {
    out["objects"].push_back({{"name", o.name},
                              {"mass", o.mass},
                              {"rest_height", o.rest_height},
                              {"table_height", o.table_height}});
  }
  if (!robot.collision_pairs.empty()) {
    out["collision_pairs"] = Json::array();
    for (const auto& [a, b] : robot.collision_pairs) out["collision_pairs"].push_back({a, b});
  }
  return out;
}

std::string serialize_description(const DescriptionDocument& doc) {
  return description_to_json(doc).dump(2);
}

// ---------------------------------------------------------------------------

std::string qualify(std::string_view instance, std::string_view name) {
  std::string out;
  out.reserve(instance.size() + name.size() + 1);
  out.append(instance).push_back(kNameSeparator);
  out.append(name);
  return out;
}

std::optional<std::size_t> SceneModel::joint_index(std::string_view qualified) const {
  auto it = joint_lookup_.find(qualified);
  if (it == joint_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SceneModel::object_index(std::string_view name) const {
  auto it = object_lookup_.find(name);
  if (it == object_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SceneModel::sensor_index(std::string_view qualified) const {
  auto it = sensor_lookup_.find(qualified);
  if (it == sensor_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t SceneModel::require_joint(std::string_view qualified) const {
  if (auto i = joint_index(qualified)) return *i;
  throw std::out_of_range("unknown joint \"" + std::string(qualified) + "\"");
}

std::vector<std::string> SceneModel::joint_names() const {
  std::vector<std::string> names;
  names.reserve(joints_.size());
  for (const auto& j : joints_) names.push_back(j.qualified);
  return names;
}

std::vector<double> SceneModel::default_posture() const {
  std::vector<double> q;
  q.reserve(joints_.size());
  for (const auto& j : joints_) q.push_back(j.default_q);
  return q;
}

SceneModel merge_scene(std::vector<SceneEntry> entries, std::vector<ObjectSpec> objects) {
  SceneModel scene;
  std::set<std::string> instances;
  for (const auto& e : entries) {
    if (e.instance.empty()) throw MergeError("instance name is empty");
    if (e.instance.find(kNameSeparator) != std::string::npos) {
      throw MergeError("instance name \"" + e.instance + "\" contains '/'");
    }
    if (!instances.insert(e.instance).second) {
      throw MergeError("duplicate instance \"" + e.instance + "\"");
    }
  }
  std::vector<std::string> object_names;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (scene.object_lookup_.count(objects[i].name) != 0) {
      throw MergeError("duplicate object \"" + objects[i].name + "\"");
    }
    scene.object_lookup_.emplace(objects[i].name, i);
    object_names.push_back(objects[i].name);
  }

  for (std::size_t e = 0; e < entries.size(); ++e) {
    const SceneEntry& entry = entries[e];
    std::vector<std::string> problems = validate_description(entry.desc, object_names);
    for (auto& p : validate_bounds(entry.desc, entry.bounds)) problems.push_back(std::move(p));
    if (!problems.empty()) {
      for (auto& p : problems) p = entry.instance + ": " + p;
      throw ValidationError(std::move(problems));
    }

    for (const auto& j : entry.desc.joints) {
      SceneJoint sj;
      sj.qualified = qualify(entry.instance, j.name);
      sj.entry = e;
      sj.spec = j;
      sj.actuator = entry.desc.actuator_for(j.name);
      if (auto it = entry.bounds.joints.find(j.name); it != entry.bounds.joints.end()) {
        sj.bounds = it->second;
      } else {
        sj.bounds = JointBounds{j.pos_limits, j.vel_limit, j.torque_limit};
      }
      if (auto it = entry.desc.default_posture.find(j.name); it != entry.desc.default_posture.end()) {
        sj.default_q = it->second;
      } else {
        sj.default_q = std::clamp(0.0, sj.bounds.pos.min, sj.bounds.pos.max);
      }
      sj.inertia_eff = effective_inertia(j);
      if (!scene.joint_lookup_.emplace(sj.qualified, scene.joints_.size()).second) {
        throw MergeError("name clash on \"" + sj.qualified + "\"");
      }
      scene.joints_.push_back(std::move(sj));
    }
    for (const auto& s : entry.desc.sensors) {
      SceneSensor ss;
      ss.qualified = qualify(entry.instance, s.name);
      ss.spec = s;
      if (entry.desc.find_joint(s.target) != nullptr) {
        ss.joint = scene.joint_lookup_.at(qualify(entry.instance, s.target));
      } else {
        ss.object = scene.object_lookup_.at(s.target);
      }
      scene.sensor_lookup_.emplace(ss.qualified, scene.sensors_.size());
      scene.sensors_.push_back(std::move(ss));
    }
  }

  scene.entries_ = std::move(entries);
  scene.objects_ = std::move(objects);
  return scene;
}

}  // namespace simbridge
