#include "fastnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace fastnav {

std::vector<double> PlannerParams::effective_accel_set() const {
  if (!accel_set.empty()) return accel_set;
  return {-a_max, -0.5 * a_max, 0.0, 0.5 * a_max, a_max};
}

double PlannerParams::effective_collision_margin() const {
  if (collision_margin >= 0.0) return collision_margin;
  return 0.5 * v_max * collision_dt;
}

std::pair<Vec3, Vec3> propagate(const Vec3& pos, const Vec3& vel, const Vec3& u, double tau) {
  return {pos + vel * tau + 0.5 * tau * tau * u, vel + u * tau};
}

Vec3 Primitive::end_pos() const {
  return start_pos + start_vel * tau + 0.5 * tau * tau * u;
}

Vec3 Primitive::end_vel() const { return start_vel + u * tau; }

void Primitive::sample(double s, Vec3& pos, Vec3& vel, Vec3& acc) const {
  pos = start_pos + start_vel * s + 0.5 * s * s * u;
  vel = start_vel + u * s;
  acc = u;
}

void PrimitiveTrajectory::state_at(double t, Vec3& pos, Vec3& vel, Vec3& acc) const {
  if (primitives.empty()) {
    pos = vel = acc = Vec3::Zero();
    return;
  }
  t = std::clamp(t, 0.0, total_duration);
  std::size_t i = 0;
  double local = t;
  while (i + 1 < primitives.size() && local >= primitives[i].tau) {
    local -= primitives[i].tau;
    ++i;
  }
  local = std::min(local, primitives[i].tau);
  primitives[i].sample(local, pos, vel, acc);
}

double primitive_cost(const Vec3& u, double tau, double rho) {
  return (u.squaredNorm() + rho) * tau;
}

bool check_primitive(const Primitive& prim, const VoxelMap& map,
                     const PlannerParams& params, double robot_radius) {
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(prim.u[axis]) > params.a_max) return false;
    if (std::abs(prim.start_vel[axis]) > params.v_max) return false;
  }
  const Vec3 vend = prim.end_vel();
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(vend[axis]) > params.v_max) return false;
  }
  const double radius = robot_radius + params.effective_collision_margin();
  const int steps = std::max(1, static_cast<int>(std::ceil(prim.tau / params.collision_dt - 1e-9)));
  for (int k = 0; k <= steps; ++k) {
    const double s = prim.tau * k / steps;
    const Vec3 p = prim.start_pos + prim.start_vel * s + 0.5 * s * s * prim.u;
    if (!map.world_in_bounds(p)) return false;
    if (map.is_occupied_inflated(p, radius, params.unknown)) return false;
  }
  return true;
}

std::vector<std::pair<Primitive, double>> successors(const Vec3& pos, const Vec3& vel,
                                                     const PlannerParams& params,
                                                     const VoxelMap& map,
                                                     double robot_radius) {
  const std::vector<double> set = params.effective_accel_set();
  std::vector<std::pair<Primitive, double>> out;
  out.reserve(set.size() * set.size() * set.size());
  Primitive prim;
  prim.start_pos = pos;
  prim.start_vel = vel;
  prim.tau = params.tau;
  for (double ux : set) {
    for (double uy : set) {
      for (double uz : set) {
        prim.u = Vec3(ux, uy, uz);
        if (!check_primitive(prim, map, params, robot_radius)) continue;
        out.emplace_back(prim, primitive_cost(prim.u, params.tau, params.rho));
      }
    }
  }
  return out;
}

namespace {

// Minimum time for a 1-D double integrator from velocity v to displacement d
// ending with |v_f| <= vt, under |vel| <= vmax and |accel| <= a. Exact
// closed form; d may be negative.
double min_time_1d(double d, double v, double vmax, double a, double vt) {
  if (d < 0.0) {
    d = -d;
    v = -v;
  }
  if (d == 0.0 && std::abs(v) <= vt) return 0.0;
  if (v > vt && (v * v - vt * vt) / (2.0 * a) > d) {
    // Braking alone overshoots: reverse through -vp and finish backward.
    const double vp = std::sqrt(0.5 * (v * v + vt * vt - 2.0 * a * d));
    return (v + 2.0 * vp - vt) / a;
  }
  if (v * v + 2.0 * a * d <= vt * vt) {
    // A single acceleration phase already ends inside the band.
    return (std::sqrt(v * v + 2.0 * a * d) - v) / a;
  }
  const double vp_sq = 0.5 * (2.0 * a * d + v * v + vt * vt);
  const double vp = std::sqrt(vp_sq);
  if (vp <= vmax) {
    return (2.0 * vp - v - vt) / a;
  }
  const double t_accel = (vmax - v) / a;
  const double t_decel = (vmax - vt) / a;
  const double d_ramps =
      (vmax * vmax - v * v) / (2.0 * a) + (vmax * vmax - vt * vt) / (2.0 * a);
  return t_accel + t_decel + (d - d_ramps) / vmax;
}

// Minimum time to land the displacement anywhere inside [d_lo, d_hi]. The
// time is unimodal in the displacement with its minimum at the natural
// braking distance, so clamping that point into the interval is optimal.
double min_time_interval(double d_lo, double d_hi, double v, double vmax, double a,
                         double vt) {
  double natural = 0.0;
  if (std::abs(v) > vt) {
    natural = std::copysign((v * v - vt * vt) / (2.0 * a), v);
  }
  const double d = std::clamp(natural, d_lo, d_hi);
  return min_time_1d(d, v, vmax, a, vt);
}

}  // namespace

double heuristic(const Vec3& pos, const Vec3& vel, const Vec3& goal_pos,
                 const PlannerParams& params, double goal_tolerance) {
  const double vt = std::min(params.goal_vel_tolerance, params.v_max);
  double t_lb = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double delta = goal_pos[axis] - pos[axis];
    const double v = std::clamp(vel[axis], -params.v_max, params.v_max);
    const double t = min_time_interval(delta - goal_tolerance, delta + goal_tolerance, v,
                                       params.v_max, params.a_max, vt);
    t_lb = std::max(t_lb, t);
  }
  return params.rho * t_lb * (1.0 - 1e-12);
}

bool StateKey::operator==(const StateKey& o) const {
  for (int i = 0; i < 6; ++i) {
    if (v[i] != o.v[i]) return false;
  }
  return true;
}

bool StateKey::operator<(const StateKey& o) const {
  for (int i = 0; i < 6; ++i) {
    if (v[i] != o.v[i]) return v[i] < o.v[i];
  }
  return false;
}

StateKey make_state_key(const Vec3& pos, const Vec3& vel, const PlannerParams& params) {
  StateKey k;
  for (int i = 0; i < 3; ++i) {
    k.v[i] = static_cast<std::int32_t>(std::llround(pos[i] / params.pos_quantum));
    k.v[3 + i] = static_cast<std::int32_t>(std::llround(vel[i] / params.vel_quantum));
  }
  return k;
}

std::size_t StateKeyHash::operator()(const StateKey& k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < 6; ++i) {
    h ^= static_cast<std::uint32_t>(k.v[i]);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

bool goal_reached(const Vec3& pos, const Vec3& vel, const Vec3& goal_pos,
                  double goal_tolerance, const PlannerParams& params) {
  if ((pos - goal_pos).norm() > goal_tolerance) return false;
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(vel[axis]) > params.goal_vel_tolerance) return false;
  }
  return true;
}

const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::kSuccess: return "success";
    case PlanStatus::kNoPath: return "no_path";
    case PlanStatus::kStartInCollision: return "start_in_collision";
    case PlanStatus::kMaxExpansionsReached: return "max_expansions";
  }
  return "unknown";
}

namespace {

struct Node {
  double g = 0.0;
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
  StateKey parent{};
  Vec3 incoming_u{Vec3::Zero()};
  bool has_parent = false;
};

struct QEntry {
  double f;
  double h;
  double g;
  StateKey key;
};

struct QCmp {
  bool operator()(const QEntry& a, const QEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return b.key < a.key;
  }
};

}  // namespace

PlanResult plan(const Vec3& start_pos, const Vec3& start_vel, const Vec3& goal_pos,
                double goal_tolerance, const VoxelMap& map, const PlannerParams& params,
                double robot_radius) {
  PlanResult result;
  if (!map.world_in_bounds(start_pos) ||
      map.is_occupied_inflated(start_pos, robot_radius, params.unknown)) {
    result.status = PlanStatus::kStartInCollision;
    return result;
  }
  if (goal_reached(start_pos, start_vel, goal_pos, goal_tolerance, params)) {
    result.status = PlanStatus::kSuccess;
    return result;
  }

  std::unordered_map<StateKey, Node, StateKeyHash> nodes;
  std::priority_queue<QEntry, std::vector<QEntry>, QCmp> open;
  nodes.reserve(4096);

  const StateKey start_key = make_state_key(start_pos, start_vel, params);
  Node start_node;
  start_node.g = 0.0;
  start_node.pos = start_pos;
  start_node.vel = start_vel;
  nodes.emplace(start_key, start_node);
  const double h0 = heuristic(start_pos, start_vel, goal_pos, params, goal_tolerance);
  open.push(QEntry{h0, h0, 0.0, start_key});

  while (!open.empty()) {
    const QEntry entry = open.top();
    open.pop();
    auto it = nodes.find(entry.key);
    if (it == nodes.end() || entry.g != it->second.g) continue;  // stale
    const Node& node = it->second;

    if (goal_reached(node.pos, node.vel, goal_pos, goal_tolerance, params)) {
      // Walk the parent chain back to the start.
      std::vector<Primitive> chain;
      StateKey k = entry.key;
      while (true) {
        const Node& n = nodes.at(k);
        if (!n.has_parent) break;
        const Node& p = nodes.at(n.parent);
        Primitive prim;
        prim.start_pos = p.pos;
        prim.start_vel = p.vel;
        prim.u = n.incoming_u;
        prim.tau = params.tau;
        chain.push_back(prim);
        k = n.parent;
      }
      std::reverse(chain.begin(), chain.end());
      result.trajectory.primitives = std::move(chain);
      result.trajectory.total_cost = node.g;
      result.trajectory.total_duration =
          params.tau * static_cast<double>(result.trajectory.primitives.size());
      result.status = PlanStatus::kSuccess;
      return result;
    }

    if (result.expansions >= params.max_expansions) {
      result.status = PlanStatus::kMaxExpansionsReached;
      return result;
    }
    ++result.expansions;

    // Copy the exact state out: successor insertion may rehash the node map.
    const Vec3 npos = node.pos;
    const Vec3 nvel = node.vel;
    const double ng = node.g;

    for (const auto& [prim, cost] : successors(npos, nvel, params, map, robot_radius)) {
      const Vec3 epos = prim.end_pos();
      const Vec3 evel = prim.end_vel();
      const double g2 = ng + cost;
      const StateKey key2 = make_state_key(epos, evel, params);
      auto found = nodes.find(key2);
      if (found != nodes.end() && g2 >= found->second.g) continue;
      Node next;
      next.g = g2;
      next.pos = epos;
      next.vel = evel;
      next.parent = entry.key;
      next.incoming_u = prim.u;
      next.has_parent = true;
      nodes[key2] = next;
      const double h2 = heuristic(epos, evel, goal_pos, params, goal_tolerance);
      open.push(QEntry{g2 + h2, h2, g2, key2});
    }
  }

  result.status = PlanStatus::kNoPath;
  return result;
}

}  // namespace fastnav
