#pragma once

#include <unordered_map>

#include "fastnav/planner.hpp"
#include "fastnav/voxel_map.hpp"

namespace fastnav::verify {

// Uninformed reference searches over exactly the successor graph the planner
// uses (same propagation, same feasibility checks, same state keys, same goal
// predicate), so on binary-exact lattices optimal costs must match the
// planner bit for bit.

struct SettledState {
  double g = 0.0;
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
};

struct DijkstraResult {
  PlanStatus status = PlanStatus::kNoPath;
  double cost = 0.0;  // optimal cost when status == kSuccess
  int expansions = 0;
  std::unordered_map<StateKey, SettledState, StateKeyHash> settled;
};

DijkstraResult dijkstra_forward(const Vec3& start_pos, const Vec3& start_vel,
                                const Vec3& goal_pos, double goal_tolerance,
                                const VoxelMap& map, const PlannerParams& params,
                                double robot_radius);

// Exact cost-to-goal over the reachable lattice, found by expanding the
// graph backwards from every lattice state satisfying the goal predicate.
// Lattice geometry is described explicitly: positions on a pos_step grid
// anchored at the map origin, per-axis velocities from vel_values.
struct LatticeSpec {
  double pos_step = 1.25;
  std::vector<double> vel_values{-2.5, 0.0, 2.5};
};

std::unordered_map<StateKey, SettledState, StateKeyHash> dijkstra_cost_to_goal(
    const Vec3& goal_pos, double goal_tolerance, const VoxelMap& map,
    const PlannerParams& params, double robot_radius, const LatticeSpec& lattice);

}  // namespace fastnav::verify
