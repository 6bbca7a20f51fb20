#include "fastnav/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fastnav {

using json = nlohmann::ordered_json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid scenario:";
  for (const auto& s : issues) {
    out += "\n  - ";
    out += s;
  }
  return out;
}

struct Ctx {
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& what) {
    issues.push_back(path + ": " + what);
  }
};

// Flags unexpected keys so typos ("velocty") surface as errors instead of
// silently falling back to defaults.
void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed, Ctx& ctx) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) ctx.fail(path + "." + item.key(), "unknown key");
  }
}

bool want_object(const json& j, const std::string& path, Ctx& ctx) {
  if (j.is_object()) return true;
  ctx.fail(path, "expected an object");
  return false;
}

double get_num(const json& j, const std::string& path, const std::string& key,
               double fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) {
    ctx.fail(path + "." + key, "expected a number");
    return fallback;
  }
  return v.get<double>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key,
              bool fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) {
    ctx.fail(path + "." + key, "expected true or false");
    return fallback;
  }
  return v.get<bool>();
}

int get_int(const json& j, const std::string& path, const std::string& key,
            int fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    ctx.fail(path + "." + key, "expected an integer");
    return fallback;
  }
  return v.get<int>();
}

std::uint64_t get_seed(const json& j, const std::string& path, const std::string& key,
                       std::uint64_t fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) {
    ctx.fail(path + "." + key, "expected a non-negative integer");
    return fallback;
  }
  return v.get<std::uint64_t>();
}

std::string get_str(const json& j, const std::string& path, const std::string& key,
                    const std::string& fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) {
    ctx.fail(path + "." + key, "expected a string");
    return fallback;
  }
  return v.get<std::string>();
}

Vec3 get_vec3(const json& j, const std::string& path, const std::string& key,
              const Vec3& fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    ctx.fail(path + "." + key, "expected an array of 3 numbers");
    return fallback;
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

std::pair<double, double> get_range(const json& j, const std::string& path,
                                    const std::string& key,
                                    std::pair<double, double> fallback, Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    ctx.fail(path + "." + key, "expected an array of 2 numbers");
    return fallback;
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

template <typename Enum>
Enum get_enum(const json& j, const std::string& path, const std::string& key,
              Enum fallback, const std::vector<std::pair<std::string, Enum>>& table,
              Ctx& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    for (const auto& [text, value] : table)
      if (s == text) return value;
  }
  std::string expected = "expected one of:";
  for (const auto& [text, value] : table) expected += " \"" + text + "\"";
  ctx.fail(path + "." + key, expected);
  return fallback;
}

const std::vector<std::pair<std::string, UnknownSpace>> kUnknownTable = {
    {"free", UnknownSpace::kFree}, {"occupied", UnknownSpace::kOccupied}};
const std::vector<std::pair<std::string, MissionType>> kMissionTable = {
    {"goal", MissionType::kGoal}, {"line", MissionType::kLine}};
const std::vector<std::pair<std::string, YawPolicy>> kYawTable = {
    {"fixed", YawPolicy::kFixed}, {"velocity_aligned", YawPolicy::kVelocityAligned}};
const std::vector<std::pair<std::string, ReplanSource>> kReplanTable = {
    {"reference", ReplanSource::kReference}, {"estimate", ReplanSource::kEstimate}};
const std::vector<std::pair<std::string, AttitudeMode>> kAttitudeTable = {
    {"first_order", AttitudeMode::kFirstOrder}, {"ideal", AttitudeMode::kIdeal}};
const std::vector<std::pair<std::string, DragModel>> kDragTable = {
    {"world_horizontal", DragModel::kWorldHorizontal},
    {"body_plane", DragModel::kBodyPlane}};

template <typename Enum>
std::string enum_text(Enum value, const std::vector<std::pair<std::string, Enum>>& table) {
  for (const auto& [text, v] : table)
    if (v == value) return text;
  return "?";
}

Box parse_box(const json& j, const std::string& path, Ctx& ctx) {
  Box b;
  if (!want_object(j, path, ctx)) return b;
  check_keys(j, path, {"min", "max"}, ctx);
  if (!j.contains("min")) ctx.fail(path + ".min", "required");
  if (!j.contains("max")) ctx.fail(path + ".max", "required");
  b.min = get_vec3(j, path, "min", Vec3::Zero(), ctx);
  b.max = get_vec3(j, path, "max", Vec3::Zero(), ctx);
  for (int k = 0; k < 3; ++k)
    if (!(b.min[k] < b.max[k])) {
      ctx.fail(path, "min must be strictly below max on every axis");
      break;
    }
  return b;
}

Cylinder parse_cylinder(const json& j, const std::string& path, Ctx& ctx) {
  Cylinder c;
  if (!want_object(j, path, ctx)) return c;
  check_keys(j, path, {"center", "radius", "z"}, ctx);
  if (j.contains("center")) {
    const json& v = j.at("center");
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      c.cx = v[0].get<double>();
      c.cy = v[1].get<double>();
    } else {
      ctx.fail(path + ".center", "expected an array of 2 numbers");
    }
  } else {
    ctx.fail(path + ".center", "required");
  }
  c.radius = get_num(j, path, "radius", 0.0, ctx);
  if (!(c.radius > 0.0)) ctx.fail(path + ".radius", "must be > 0");
  auto [z0, z1] = get_range(j, path, "z", {0.0, 0.0}, ctx);
  c.z_min = z0;
  c.z_max = z1;
  if (!(c.z_min < c.z_max)) ctx.fail(path + ".z", "must satisfy z[0] < z[1]");
  return c;
}

// Seeded obstacle generator: scatters vertical cylinders over a region while
// keeping a clear disc around the start and goal. Resolved to concrete
// cylinders at parse time, so a saved scenario lists them explicitly.
void generate_cylinders(const json& j, const std::string& path, GroundTruthEnv& env,
                        const Vec3& start, const Vec3& goal, std::uint64_t default_seed,
                        Ctx& ctx) {
  check_keys(j, path, {"count", "seed", "radius", "z", "region", "clearance"}, ctx);
  const int count = get_int(j, path, "count", 0, ctx);
  if (count < 0) ctx.fail(path + ".count", "must be >= 0");
  const std::uint64_t seed = get_seed(j, path, "seed", default_seed, ctx);
  auto [r_lo, r_hi] = get_range(j, path, "radius", {0.3, 0.3}, ctx);
  if (!(r_lo > 0.0) || r_hi < r_lo) ctx.fail(path + ".radius", "need 0 < radius[0] <= radius[1]");
  auto [z_lo, z_hi] = get_range(j, path, "z", {env.bounds.min.z(), env.bounds.max.z()}, ctx);
  if (!(z_lo < z_hi)) ctx.fail(path + ".z", "must satisfy z[0] < z[1]");
  Box region = env.bounds;
  if (j.contains("region")) region = parse_box(j.at("region"), path + ".region", ctx);
  const double clearance = get_num(j, path, "clearance", 2.0, ctx);
  if (!(clearance >= 0.0)) ctx.fail(path + ".clearance", "must be >= 0");
  if (!ctx.issues.empty()) return;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(region.min.x(), region.max.x());
  std::uniform_real_distribution<double> uy(region.min.y(), region.max.y());
  std::uniform_real_distribution<double> ur(r_lo, r_hi);
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const double x = ux(rng);
      const double y = uy(rng);
      const double r = ur(rng);
      const double d_start = std::hypot(x - start.x(), y - start.y());
      const double d_goal = std::hypot(x - goal.x(), y - goal.y());
      if (d_start < clearance + r || d_goal < clearance + r) continue;
      env.cylinders.push_back(Cylinder{x, y, r, z_lo, z_hi});
      placed = true;
    }
    if (!placed) {
      ctx.fail(path, "could not place obstacle " + std::to_string(i) +
                         " with the requested clearance");
      return;
    }
  }
}

bool box_intersects(const Box& a, const Box& b) {
  for (int k = 0; k < 3; ++k)
    if (a.max[k] <= b.min[k] || a.min[k] >= b.max[k]) return false;
  return true;
}

bool cylinder_intersects(const Cylinder& c, const Box& b) {
  if (c.z_max <= b.min.z() || c.z_min >= b.max.z()) return false;
  const double x = std::clamp(c.cx, b.min.x(), b.max.x());
  const double y = std::clamp(c.cy, b.min.y(), b.max.y());
  return std::hypot(x - c.cx, y - c.cy) < c.radius;
}

Scenario parse_scenario_json(const json& root) {
  Ctx ctx;
  Scenario s;
  if (!root.is_object()) throw ScenarioError({"top level: expected an object"});
  check_keys(root, "scenario",
             {"name", "seed", "world", "start", "goal", "robot_radius", "mission", "map",
              "lidar", "planner", "refine", "control", "vehicle", "noise", "rates"},
             ctx);

  s.name = get_str(root, "scenario", "name", "", ctx);
  s.seed = get_seed(root, "scenario", "seed", 1, ctx);
  MissionConfig& m = s.mission;

  // --- start / goal -------------------------------------------------------
  if (root.contains("start") && want_object(root.at("start"), "start", ctx)) {
    const json& j = root.at("start");
    check_keys(j, "start", {"position", "velocity", "yaw"}, ctx);
    if (!j.contains("position")) ctx.fail("start.position", "required");
    m.start_pos = get_vec3(j, "start", "position", Vec3::Zero(), ctx);
    m.start_vel = get_vec3(j, "start", "velocity", Vec3::Zero(), ctx);
    m.start_yaw = get_num(j, "start", "yaw", 0.0, ctx);
  } else if (!root.contains("start")) {
    ctx.fail("start", "required");
  }
  if (root.contains("goal") && want_object(root.at("goal"), "goal", ctx)) {
    const json& j = root.at("goal");
    check_keys(j, "goal", {"position", "tolerance"}, ctx);
    if (!j.contains("position")) ctx.fail("goal.position", "required");
    m.goal_pos = get_vec3(j, "goal", "position", Vec3::Zero(), ctx);
    m.goal_tolerance = get_num(j, "goal", "tolerance", 1.0, ctx);
    if (!(m.goal_tolerance > 0.0)) ctx.fail("goal.tolerance", "must be > 0");
  }

  m.robot_radius = get_num(root, "scenario", "robot_radius", 0.3, ctx);
  if (!(m.robot_radius > 0.0)) ctx.fail("robot_radius", "must be > 0");

  // --- mission -------------------------------------------------------------
  if (root.contains("mission") && want_object(root.at("mission"), "mission", ctx)) {
    const json& j = root.at("mission");
    check_keys(j, "mission",
               {"type", "timeout", "settle_time", "scan", "yaw_policy", "replan_source",
                "line"},
               ctx);
    m.type = get_enum(j, "mission", "type", MissionType::kGoal, kMissionTable, ctx);
    m.timeout = get_num(j, "mission", "timeout", 120.0, ctx);
    if (!(m.timeout > 0.0)) ctx.fail("mission.timeout", "must be > 0");
    m.settle_time = get_num(j, "mission", "settle_time", 2.0, ctx);
    if (!(m.settle_time >= 0.0)) ctx.fail("mission.settle_time", "must be >= 0");
    m.scan_enabled = get_bool(j, "mission", "scan", true, ctx);
    m.yaw_policy = get_enum(j, "mission", "yaw_policy", YawPolicy::kFixed, kYawTable, ctx);
    m.replan_source =
        get_enum(j, "mission", "replan_source", ReplanSource::kReference, kReplanTable, ctx);
    if (j.contains("line") && want_object(j.at("line"), "mission.line", ctx)) {
      const json& l = j.at("line");
      check_keys(l, "mission.line", {"direction", "length", "cruise_speed", "ramp_accel"},
                 ctx);
      m.line.direction = get_vec3(l, "mission.line", "direction", Vec3::UnitX(), ctx);
      m.line.length = get_num(l, "mission.line", "length", 100.0, ctx);
      m.line.cruise_speed = get_num(l, "mission.line", "cruise_speed", 10.0, ctx);
      m.line.ramp_accel = get_num(l, "mission.line", "ramp_accel", 2.5, ctx);
      if (m.line.direction.norm() < 1e-9) {
        ctx.fail("mission.line.direction", "must be nonzero");
      } else {
        m.line.direction.normalize();
      }
      if (!(m.line.length > 0.0)) ctx.fail("mission.line.length", "must be > 0");
      if (!(m.line.cruise_speed > 0.0)) ctx.fail("mission.line.cruise_speed", "must be > 0");
      if (!(m.line.ramp_accel > 0.0)) ctx.fail("mission.line.ramp_accel", "must be > 0");
    }
  }

  if (m.type == MissionType::kGoal && !root.contains("goal")) ctx.fail("goal", "required");
  if (m.type == MissionType::kLine) {
    // A line mission is fully described by start + profile; an explicit goal
    // must agree with the profile endpoint.
    const Vec3 end = m.start_pos + m.line.direction * m.line.length;
    if (root.contains("goal")) {
      if ((m.goal_pos - end).norm() > 1e-6)
        ctx.fail("goal.position", "does not match start + direction * length");
    } else {
      m.goal_pos = end;
    }
  }

  // --- world ---------------------------------------------------------------
  if (root.contains("world") && want_object(root.at("world"), "world", ctx)) {
    const json& j = root.at("world");
    check_keys(j, "world", {"bounds", "boxes", "cylinders", "random_cylinders"}, ctx);
    if (!j.contains("bounds")) {
      ctx.fail("world.bounds", "required");
    } else {
      m.env.bounds = parse_box(j.at("bounds"), "world.bounds", ctx);
    }
    if (j.contains("boxes")) {
      const json& arr = j.at("boxes");
      if (!arr.is_array()) {
        ctx.fail("world.boxes", "expected an array");
      } else {
        for (std::size_t i = 0; i < arr.size(); ++i)
          m.env.boxes.push_back(
              parse_box(arr[i], "world.boxes[" + std::to_string(i) + "]", ctx));
      }
    }
    if (j.contains("cylinders")) {
      const json& arr = j.at("cylinders");
      if (!arr.is_array()) {
        ctx.fail("world.cylinders", "expected an array");
      } else {
        for (std::size_t i = 0; i < arr.size(); ++i)
          m.env.cylinders.push_back(
              parse_cylinder(arr[i], "world.cylinders[" + std::to_string(i) + "]", ctx));
      }
    }
    if (j.contains("random_cylinders") &&
        want_object(j.at("random_cylinders"), "world.random_cylinders", ctx)) {
      generate_cylinders(j.at("random_cylinders"), "world.random_cylinders", m.env,
                         m.start_pos, m.goal_pos, s.seed, ctx);
    }
  } else if (!root.contains("world")) {
    ctx.fail("world", "required");
  }

  // --- map -----------------------------------------------------------------
  if (root.contains("map") && want_object(root.at("map"), "map", ctx)) {
    const json& j = root.at("map");
    check_keys(j, "map", {"resolution", "unknown"}, ctx);
    m.map_resolution = get_num(j, "map", "resolution", 0.5, ctx);
    if (!(m.map_resolution > 0.0)) ctx.fail("map.resolution", "must be > 0");
    m.planner.unknown = get_enum(j, "map", "unknown", UnknownSpace::kFree, kUnknownTable, ctx);
  }

  // --- lidar ---------------------------------------------------------------
  if (root.contains("lidar") && want_object(root.at("lidar"), "lidar", ctx)) {
    const json& j = root.at("lidar");
    check_keys(j, "lidar",
               {"max_range", "angular_resolution", "fov", "scan_rate", "nod_amplitude",
                "nod_period", "mount_offset", "mount_rpy"},
               ctx);
    LidarParams& l = m.lidar;
    l.max_range = get_num(j, "lidar", "max_range", l.max_range, ctx);
    l.angular_resolution = get_num(j, "lidar", "angular_resolution", l.angular_resolution, ctx);
    l.fov = get_num(j, "lidar", "fov", l.fov, ctx);
    l.scan_rate = get_num(j, "lidar", "scan_rate", l.scan_rate, ctx);
    l.nod_amplitude = get_num(j, "lidar", "nod_amplitude", l.nod_amplitude, ctx);
    l.nod_period = get_num(j, "lidar", "nod_period", l.nod_period, ctx);
    l.mount_offset = get_vec3(j, "lidar", "mount_offset", l.mount_offset, ctx);
    l.mount_rpy = get_vec3(j, "lidar", "mount_rpy", l.mount_rpy, ctx);
    if (!(l.max_range > 0.0)) ctx.fail("lidar.max_range", "must be > 0");
    if (!(l.angular_resolution > 0.0)) ctx.fail("lidar.angular_resolution", "must be > 0");
    if (!(l.fov > 0.0 && l.fov <= 2.0 * M_PI + 1e-9)) ctx.fail("lidar.fov", "must be in (0, 2*pi]");
    if (!(l.scan_rate > 0.0)) ctx.fail("lidar.scan_rate", "must be > 0");
    if (!(l.nod_amplitude >= 0.0 && l.nod_amplitude <= M_PI / 2.0))
      ctx.fail("lidar.nod_amplitude", "must be in [0, pi/2]");
    if (!(l.nod_period > 0.0)) ctx.fail("lidar.nod_period", "must be > 0");
  }

  // --- planner ---------------------------------------------------------------
  PlannerParams& p = m.planner;
  if (root.contains("planner") && want_object(root.at("planner"), "planner", ctx)) {
    const json& j = root.at("planner");
    check_keys(j, "planner",
               {"accel_set", "tau", "v_max", "a_max", "rho", "collision_dt",
                "collision_margin", "pos_quantum", "vel_quantum", "max_expansions",
                "goal_vel_tolerance"},
               ctx);
    p.tau = get_num(j, "planner", "tau", p.tau, ctx);
    p.v_max = get_num(j, "planner", "v_max", p.v_max, ctx);
    p.a_max = get_num(j, "planner", "a_max", p.a_max, ctx);
    p.rho = get_num(j, "planner", "rho", 10.0 * p.a_max * p.a_max, ctx);
    p.collision_dt = get_num(j, "planner", "collision_dt", p.tau / 10.0, ctx);
    p.collision_margin = get_num(j, "planner", "collision_margin", -1.0, ctx);
    p.pos_quantum = get_num(j, "planner", "pos_quantum", m.map_resolution / 2.0, ctx);
    p.vel_quantum = get_num(j, "planner", "vel_quantum", p.vel_quantum, ctx);
    p.max_expansions = get_int(j, "planner", "max_expansions", p.max_expansions, ctx);
    p.goal_vel_tolerance = get_num(j, "planner", "goal_vel_tolerance", p.goal_vel_tolerance, ctx);
    if (j.contains("accel_set")) {
      const json& arr = j.at("accel_set");
      if (!arr.is_array() || arr.empty()) {
        ctx.fail("planner.accel_set", "expected a non-empty array of numbers");
      } else {
        for (const auto& v : arr) {
          if (!v.is_number()) {
            ctx.fail("planner.accel_set", "expected a non-empty array of numbers");
            p.accel_set.clear();
            break;
          }
          p.accel_set.push_back(v.get<double>());
        }
      }
    }
  } else {
    p.rho = 10.0 * p.a_max * p.a_max;
    p.collision_dt = p.tau / 10.0;
    p.pos_quantum = m.map_resolution / 2.0;
  }
  if (!(p.tau > 0.0)) ctx.fail("planner.tau", "must be > 0");
  if (!(p.v_max > 0.0)) ctx.fail("planner.v_max", "must be > 0");
  if (!(p.a_max > 0.0)) ctx.fail("planner.a_max", "must be > 0");
  if (!(p.rho > 0.0)) ctx.fail("planner.rho", "must be > 0");
  if (!(p.collision_dt > 0.0)) ctx.fail("planner.collision_dt", "must be > 0");
  if (!(p.pos_quantum > 0.0)) ctx.fail("planner.pos_quantum", "must be > 0");
  if (!(p.vel_quantum > 0.0)) ctx.fail("planner.vel_quantum", "must be > 0");
  if (p.max_expansions <= 0) ctx.fail("planner.max_expansions", "must be > 0");
  if (!(p.goal_vel_tolerance >= 0.0)) ctx.fail("planner.goal_vel_tolerance", "must be >= 0");
  // Resolve the derived defaults so a round trip through save/load is exact.
  if (p.accel_set.empty()) {
    p.accel_set = p.effective_accel_set();
  } else {
    bool has_zero = false;
    for (double u : p.accel_set) {
      if (u == 0.0) has_zero = true;
      if (std::abs(u) > p.a_max + 1e-12) {
        ctx.fail("planner.accel_set", "entries must satisfy |u| <= a_max");
        break;
      }
      bool mirrored = false;
      for (double w : p.accel_set)
        if (std::abs(w + u) <= 1e-12) mirrored = true;
      if (!mirrored) {
        ctx.fail("planner.accel_set", "must be symmetric about zero");
        break;
      }
    }
    if (!has_zero) ctx.fail("planner.accel_set", "must contain 0");
  }
  if (p.collision_margin < 0.0) p.collision_margin = p.effective_collision_margin();

  // --- refine ----------------------------------------------------------------
  if (root.contains("refine") && want_object(root.at("refine"), "refine", ctx)) {
    const json& j = root.at("refine");
    check_keys(j, "refine", {"order", "continuity_order", "minimized_order"}, ctx);
    m.refine.order = get_int(j, "refine", "order", m.refine.order, ctx);
    m.refine.continuity_order =
        get_int(j, "refine", "continuity_order", m.refine.continuity_order, ctx);
    m.refine.minimized_order =
        get_int(j, "refine", "minimized_order", m.refine.minimized_order, ctx);
  }
  try {
    m.refine.validate();
  } catch (const std::invalid_argument& e) {
    ctx.fail("refine", e.what());
  }

  // --- control -----------------------------------------------------------------
  ControlParams& c = m.control;
  if (root.contains("control") && want_object(root.at("control"), "control", ctx)) {
    const json& j = root.at("control");
    check_keys(j, "control", {"k_x", "k_v", "k_d", "mass", "f_max", "drag_comp"}, ctx);
    c.k_x = get_num(j, "control", "k_x", c.k_x, ctx);
    c.k_v = get_num(j, "control", "k_v", c.k_v, ctx);
    c.k_d = get_num(j, "control", "k_d", c.k_d, ctx);
    c.mass = get_num(j, "control", "mass", c.mass, ctx);
    c.f_max = get_num(j, "control", "f_max", 2.0 * c.mass * kGravity, ctx);
    c.drag_comp = get_bool(j, "control", "drag_comp", c.drag_comp, ctx);
  } else {
    c.f_max = 2.0 * c.mass * kGravity;
  }
  if (!(c.k_x > 0.0)) ctx.fail("control.k_x", "must be > 0");
  if (!(c.k_v > 0.0)) ctx.fail("control.k_v", "must be > 0");
  if (!(c.k_d >= 0.0)) ctx.fail("control.k_d", "must be >= 0");
  if (!(c.mass > 0.0)) ctx.fail("control.mass", "must be > 0");
  if (!(c.f_max > 0.0)) ctx.fail("control.f_max", "must be > 0");

  // --- vehicle -------------------------------------------------------------------
  VehicleParams& veh = m.vehicle;
  veh.mass = c.mass;
  veh.k_d = c.k_d;
  veh.f_max = c.f_max;
  if (root.contains("vehicle") && want_object(root.at("vehicle"), "vehicle", ctx)) {
    const json& j = root.at("vehicle");
    check_keys(j, "vehicle",
               {"mass", "k_d", "f_max", "tau_att", "attitude_mode", "drag_model"}, ctx);
    veh.mass = get_num(j, "vehicle", "mass", veh.mass, ctx);
    veh.k_d = get_num(j, "vehicle", "k_d", veh.k_d, ctx);
    veh.f_max = get_num(j, "vehicle", "f_max", veh.f_max, ctx);
    veh.tau_att = get_num(j, "vehicle", "tau_att", veh.tau_att, ctx);
    veh.attitude_mode =
        get_enum(j, "vehicle", "attitude_mode", veh.attitude_mode, kAttitudeTable, ctx);
    veh.drag_model = get_enum(j, "vehicle", "drag_model", veh.drag_model, kDragTable, ctx);
  }
  if (!(veh.mass > 0.0)) ctx.fail("vehicle.mass", "must be > 0");
  if (!(veh.k_d >= 0.0)) ctx.fail("vehicle.k_d", "must be >= 0");
  if (!(veh.f_max > 0.0)) ctx.fail("vehicle.f_max", "must be > 0");
  if (!(veh.tau_att > 0.0)) ctx.fail("vehicle.tau_att", "must be > 0");

  // --- noise / rates ---------------------------------------------------------------
  m.noise.seed = s.seed;
  if (root.contains("noise") && want_object(root.at("noise"), "noise", ctx)) {
    const json& j = root.at("noise");
    check_keys(j, "noise", {"sigma_pos", "sigma_vel", "seed"}, ctx);
    m.noise.sigma_pos = get_num(j, "noise", "sigma_pos", 0.0, ctx);
    m.noise.sigma_vel = get_num(j, "noise", "sigma_vel", 0.0, ctx);
    m.noise.seed = get_seed(j, "noise", "seed", s.seed, ctx);
    if (!(m.noise.sigma_pos >= 0.0)) ctx.fail("noise.sigma_pos", "must be >= 0");
    if (!(m.noise.sigma_vel >= 0.0)) ctx.fail("noise.sigma_vel", "must be >= 0");
  }
  RateConfig& r = m.rates;
  if (root.contains("rates") && want_object(root.at("rates"), "rates", ctx)) {
    const json& j = root.at("rates");
    check_keys(j, "rates", {"control_hz", "scan_hz", "replan_hz", "substep"}, ctx);
    r.control_hz = get_num(j, "rates", "control_hz", r.control_hz, ctx);
    r.scan_hz = get_num(j, "rates", "scan_hz", r.scan_hz, ctx);
    r.replan_hz = get_num(j, "rates", "replan_hz", r.replan_hz, ctx);
    r.substep = get_num(j, "rates", "substep", r.substep, ctx);
  }
  if (!(r.control_hz > 0.0)) ctx.fail("rates.control_hz", "must be > 0");
  if (!(r.scan_hz > 0.0 && r.scan_hz <= r.control_hz))
    ctx.fail("rates.scan_hz", "must be in (0, control_hz]");
  if (!(r.replan_hz > 0.0 && r.replan_hz <= r.control_hz))
    ctx.fail("rates.replan_hz", "must be in (0, control_hz]");
  if (!(r.substep > 0.0 && r.substep <= 1.0 / r.control_hz + 1e-12))
    ctx.fail("rates.substep", "must be in (0, 1/control_hz]");

  // --- cross-field checks ------------------------------------------------------------
  const Box& bounds = m.env.bounds;
  bool bounds_ok = true;
  for (int k = 0; k < 3; ++k)
    if (!(bounds.min[k] < bounds.max[k])) bounds_ok = false;
  if (bounds_ok) {
    if (!bounds.contains(m.start_pos)) ctx.fail("start.position", "outside world bounds");
    if (!bounds.contains(m.goal_pos)) ctx.fail("goal.position", "outside world bounds");
    for (std::size_t i = 0; i < m.env.boxes.size(); ++i)
      if (!box_intersects(m.env.boxes[i], bounds))
        ctx.fail("world.boxes[" + std::to_string(i) + "]", "does not intersect world bounds");
    for (std::size_t i = 0; i < m.env.cylinders.size(); ++i)
      if (!cylinder_intersects(m.env.cylinders[i], bounds))
        ctx.fail("world.cylinders[" + std::to_string(i) + "]",
                 "does not intersect world bounds");
  }
  for (int k = 0; k < 3; ++k)
    if (std::abs(m.start_vel[k]) > p.v_max + 1e-12) {
      ctx.fail("start.velocity", "exceeds planner.v_max on some axis");
      break;
    }

  if (!ctx.issues.empty()) throw ScenarioError(std::move(ctx.issues));
  return s;
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> issues_in)
    : std::runtime_error(join_issues(issues_in)), issues(std::move(issues_in)) {}

Scenario parse_scenario_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("json parse error: ") + e.what()});
  }
  return parse_scenario_json(root);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_text(const Scenario& s) {
  const MissionConfig& m = s.mission;
  json root;
  root["name"] = s.name;
  root["seed"] = s.seed;

  json world;
  world["bounds"] = {{"min", vec3_json(m.env.bounds.min)}, {"max", vec3_json(m.env.bounds.max)}};
  if (!m.env.boxes.empty()) {
    json arr = json::array();
    for (const auto& b : m.env.boxes)
      arr.push_back({{"min", vec3_json(b.min)}, {"max", vec3_json(b.max)}});
    world["boxes"] = arr;
  }
  if (!m.env.cylinders.empty()) {
    json arr = json::array();
    for (const auto& c : m.env.cylinders)
      arr.push_back({{"center", json::array({c.cx, c.cy})},
                     {"radius", c.radius},
                     {"z", json::array({c.z_min, c.z_max})}});
    world["cylinders"] = arr;
  }
  root["world"] = world;

  root["start"] = {{"position", vec3_json(m.start_pos)},
                   {"velocity", vec3_json(m.start_vel)},
                   {"yaw", m.start_yaw}};
  root["goal"] = {{"position", vec3_json(m.goal_pos)}, {"tolerance", m.goal_tolerance}};
  root["robot_radius"] = m.robot_radius;

  json mission;
  mission["type"] = enum_text(m.type, kMissionTable);
  mission["timeout"] = m.timeout;
  mission["settle_time"] = m.settle_time;
  mission["scan"] = m.scan_enabled;
  mission["yaw_policy"] = enum_text(m.yaw_policy, kYawTable);
  mission["replan_source"] = enum_text(m.replan_source, kReplanTable);
  if (m.type == MissionType::kLine)
    mission["line"] = {{"direction", vec3_json(m.line.direction)},
                       {"length", m.line.length},
                       {"cruise_speed", m.line.cruise_speed},
                       {"ramp_accel", m.line.ramp_accel}};
  root["mission"] = mission;

  root["map"] = {{"resolution", m.map_resolution},
                 {"unknown", enum_text(m.planner.unknown, kUnknownTable)}};

  const LidarParams& l = m.lidar;
  root["lidar"] = {{"max_range", l.max_range},
                   {"angular_resolution", l.angular_resolution},
                   {"fov", l.fov},
                   {"scan_rate", l.scan_rate},
                   {"nod_amplitude", l.nod_amplitude},
                   {"nod_period", l.nod_period},
                   {"mount_offset", vec3_json(l.mount_offset)},
                   {"mount_rpy", vec3_json(l.mount_rpy)}};

  const PlannerParams& p = m.planner;
  root["planner"] = {{"accel_set", p.accel_set},
                     {"tau", p.tau},
                     {"v_max", p.v_max},
                     {"a_max", p.a_max},
                     {"rho", p.rho},
                     {"collision_dt", p.collision_dt},
                     {"collision_margin", p.collision_margin},
                     {"pos_quantum", p.pos_quantum},
                     {"vel_quantum", p.vel_quantum},
                     {"max_expansions", p.max_expansions},
                     {"goal_vel_tolerance", p.goal_vel_tolerance}};

  root["refine"] = {{"order", m.refine.order},
                    {"continuity_order", m.refine.continuity_order},
                    {"minimized_order", m.refine.minimized_order}};

  const ControlParams& c = m.control;
  root["control"] = {{"k_x", c.k_x}, {"k_v", c.k_v},   {"k_d", c.k_d},
                     {"mass", c.mass}, {"f_max", c.f_max}, {"drag_comp", c.drag_comp}};

  const VehicleParams& veh = m.vehicle;
  root["vehicle"] = {{"mass", veh.mass},
                     {"k_d", veh.k_d},
                     {"f_max", veh.f_max},
                     {"tau_att", veh.tau_att},
                     {"attitude_mode", enum_text(veh.attitude_mode, kAttitudeTable)},
                     {"drag_model", enum_text(veh.drag_model, kDragTable)}};

  root["noise"] = {{"sigma_pos", m.noise.sigma_pos},
                   {"sigma_vel", m.noise.sigma_vel},
                   {"seed", m.noise.seed}};

  root["rates"] = {{"control_hz", m.rates.control_hz},
                   {"scan_hz", m.rates.scan_hz},
                   {"replan_hz", m.rates.replan_hz},
                   {"substep", m.rates.substep}};

  return root.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << scenario_to_text(s);
}

}  // namespace fastnav
