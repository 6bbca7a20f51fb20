#include "fastnav/verify/dijkstra_oracle.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace fastnav::verify {

namespace {

struct QEntry {
  double g;
  StateKey key;
};

struct QCmp {
  bool operator()(const QEntry& a, const QEntry& b) const {
    if (a.g != b.g) return a.g > b.g;
    return b.key < a.key;
  }
};

}  // namespace

DijkstraResult dijkstra_forward(const Vec3& start_pos, const Vec3& start_vel,
                                const Vec3& goal_pos, double goal_tolerance,
                                const VoxelMap& map, const PlannerParams& params,
                                double robot_radius) {
  DijkstraResult res;
  if (!map.world_in_bounds(start_pos) ||
      map.is_occupied_inflated(start_pos, robot_radius, params.unknown)) {
    res.status = PlanStatus::kStartInCollision;
    return res;
  }
  if (goal_reached(start_pos, start_vel, goal_pos, goal_tolerance, params)) {
    res.status = PlanStatus::kSuccess;
    res.cost = 0.0;
    return res;
  }

  std::unordered_map<StateKey, SettledState, StateKeyHash> best;
  std::unordered_map<StateKey, bool, StateKeyHash> closed;
  std::priority_queue<QEntry, std::vector<QEntry>, QCmp> open;

  const StateKey k0 = make_state_key(start_pos, start_vel, params);
  best[k0] = SettledState{0.0, start_pos, start_vel};
  open.push(QEntry{0.0, k0});

  while (!open.empty()) {
    const QEntry top = open.top();
    open.pop();
    auto it = best.find(top.key);
    if (it == best.end() || top.g != it->second.g) continue;
    if (closed[top.key]) continue;
    closed[top.key] = true;
    res.settled[top.key] = it->second;

    const Vec3 pos = it->second.pos;
    const Vec3 vel = it->second.vel;
    const double g = it->second.g;
    if (goal_reached(pos, vel, goal_pos, goal_tolerance, params)) {
      res.status = PlanStatus::kSuccess;
      res.cost = g;
      return res;
    }
    if (res.expansions >= params.max_expansions) {
      res.status = PlanStatus::kMaxExpansionsReached;
      return res;
    }
    ++res.expansions;

    for (const auto& [prim, cost] : successors(pos, vel, params, map, robot_radius)) {
      const Vec3 npos = prim.end_pos();
      const Vec3 nvel = prim.end_vel();
      const StateKey nk = make_state_key(npos, nvel, params);
      const double ng = g + cost;
      auto found = best.find(nk);
      if (found == best.end() || ng < found->second.g) {
        best[nk] = SettledState{ng, npos, nvel};
        open.push(QEntry{ng, nk});
      }
    }
  }
  res.status = PlanStatus::kNoPath;
  return res;
}

std::unordered_map<StateKey, SettledState, StateKeyHash> dijkstra_cost_to_goal(
    const Vec3& goal_pos, double goal_tolerance, const VoxelMap& map,
    const PlannerParams& params, double robot_radius, const LatticeSpec& lattice) {
  std::unordered_map<StateKey, SettledState, StateKeyHash> best;
  std::unordered_map<StateKey, bool, StateKeyHash> closed;
  std::priority_queue<QEntry, std::vector<QEntry>, QCmp> open;

  // Every lattice state inside the goal ball with admissible terminal
  // velocity is a zero-cost seed.
  const Vec3 origin = map.origin();
  const Vec3 corner = map.max_corner();
  const double step = lattice.pos_step;
  const auto lo = [&](int axis) {
    return static_cast<int>(std::ceil((std::max(origin[axis], goal_pos[axis] - goal_tolerance) -
                                       origin[axis]) /
                                      step -
                                      1e-9));
  };
  const auto hi = [&](int axis) {
    return static_cast<int>(std::floor((std::min(corner[axis], goal_pos[axis] + goal_tolerance) -
                                        origin[axis]) /
                                       step +
                                       1e-9));
  };
  for (int ix = lo(0); ix <= hi(0); ++ix) {
    for (int iy = lo(1); iy <= hi(1); ++iy) {
      for (int iz = lo(2); iz <= hi(2); ++iz) {
        const Vec3 pos = origin + step * Vec3(ix, iy, iz);
        for (double vx : lattice.vel_values) {
          for (double vy : lattice.vel_values) {
            for (double vz : lattice.vel_values) {
              const Vec3 vel(vx, vy, vz);
              if (!goal_reached(pos, vel, goal_pos, goal_tolerance, params)) continue;
              const StateKey k = make_state_key(pos, vel, params);
              auto it = best.find(k);
              if (it == best.end() || 0.0 < it->second.g) {
                best[k] = SettledState{0.0, pos, vel};
                open.push(QEntry{0.0, k});
              }
            }
          }
        }
      }
    }
  }

  const std::vector<double> accel = params.effective_accel_set();
  const double tau = params.tau;
  while (!open.empty()) {
    const QEntry top = open.top();
    open.pop();
    auto it = best.find(top.key);
    if (it == best.end() || top.g != it->second.g) continue;
    if (closed[top.key]) continue;
    closed[top.key] = true;

    const Vec3 pos = it->second.pos;
    const Vec3 vel = it->second.vel;
    const double g = it->second.g;

    // Predecessors: states one primitive upstream of (pos, vel).
    Primitive prim;
    prim.tau = tau;
    for (double ux : accel) {
      for (double uy : accel) {
        for (double uz : accel) {
          const Vec3 u(ux, uy, uz);
          const Vec3 pvel = vel - u * tau;
          const Vec3 ppos = pos - pvel * tau - 0.5 * tau * tau * u;
          prim.start_pos = ppos;
          prim.start_vel = pvel;
          prim.u = u;
          if (!check_primitive(prim, map, params, robot_radius)) continue;
          const double ng = g + primitive_cost(u, tau, params.rho);
          const StateKey pk = make_state_key(ppos, pvel, params);
          auto found = best.find(pk);
          if (found == best.end() || ng < found->second.g) {
            best[pk] = SettledState{ng, ppos, pvel};
            open.push(QEntry{ng, pk});
          }
        }
      }
    }
  }
  return best;
}

}  // namespace fastnav::verify
