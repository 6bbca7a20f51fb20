#pragma once

#include <cstdint>

#include "fastnav/planner.hpp"
#include "fastnav/voxel_map.hpp"

namespace fastnav::verify {

// A self-contained planning problem on a lattice whose states and edge costs
// are all exactly representable in binary floating point, so an independent
// search over the same successor graph must reproduce costs bit for bit.
struct OracleCase {
  VoxelMap map;
  Vec3 start_pos{Vec3::Zero()};
  Vec3 start_vel{Vec3::Zero()};
  Vec3 goal_pos{Vec3::Zero()};
  double goal_tolerance = 1.5;
  double robot_radius = 0.3;
  PlannerParams params;
};

// tau = 1, inputs {-2.5, 0, 2.5}, rho = 62.5, v_max = 2.5. Starting from a
// 1.25 m position grid every reachable position stays on that grid and every
// edge cost is a multiple of 2^-4.
PlannerParams exact_lattice_params();

// Seeded random 20 x 20 x 5 m world at 0.5 m resolution with 10-40 box-shaped
// obstacle clusters, keeping the start and goal neighborhoods clear.
OracleCase make_oracle_case(std::uint64_t seed);

}  // namespace fastnav::verify
