#include "fastnav/verify/world_gen.hpp"

#include <random>

namespace fastnav::verify {

PlannerParams exact_lattice_params() {
  PlannerParams p;
  p.accel_set = {-2.5, 0.0, 2.5};
  p.tau = 1.0;
  p.v_max = 2.5;
  p.a_max = 2.5;
  p.rho = 62.5;
  p.collision_dt = 0.1;
  p.pos_quantum = 0.25;
  p.vel_quantum = 0.1;
  p.max_expansions = 200000;
  p.goal_vel_tolerance = 2.6;
  return p;
}

OracleCase make_oracle_case(std::uint64_t seed) {
  OracleCase oc;
  oc.params = exact_lattice_params();
  // Half the cases must arrive essentially at rest, which forces the search
  // to shape its approach instead of coasting through the goal ball.
  if (seed % 2 == 0) oc.params.goal_vel_tolerance = 0.0;

  const double res = 0.5;
  const Eigen::Vector3i dims(40, 40, 10);  // 20 x 20 x 5 m
  oc.map = VoxelMap(Vec3::Zero(), res, dims);

  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  std::uniform_int_distribution<int> n_obs(10, 40);
  std::uniform_int_distribution<int> cell_x(0, dims.x() - 1);
  std::uniform_int_distribution<int> cell_y(0, dims.y() - 1);
  std::uniform_int_distribution<int> cell_z(0, dims.z() - 1);
  std::uniform_int_distribution<int> extent(1, 4);

  oc.start_pos = Vec3(2.5, 2.5, 2.5);
  oc.start_vel = Vec3::Zero();
  // Goal on the reachable 1.25 m position lattice, biased to the far side.
  std::uniform_int_distribution<int> goal_xy(10, 14);  // * 1.25 -> [12.5, 17.5]
  std::uniform_int_distribution<int> goal_z(1, 3);
  oc.goal_pos = Vec3(1.25 * goal_xy(rng), 1.25 * goal_xy(rng), 1.25 * goal_z(rng));

  const int count = n_obs(rng);
  for (int i = 0; i < count; ++i) {
    const Eigen::Vector3i base(cell_x(rng), cell_y(rng), cell_z(rng));
    const Eigen::Vector3i ext(extent(rng), extent(rng), extent(rng));
    // Skip clusters that would wall in the start or goal.
    bool too_close = false;
    for (int dz = 0; dz < ext.z() && !too_close; ++dz)
      for (int dy = 0; dy < ext.y() && !too_close; ++dy)
        for (int dx = 0; dx < ext.x() && !too_close; ++dx) {
          const Eigen::Vector3i idx = base + Eigen::Vector3i(dx, dy, dz);
          if (!oc.map.index_in_bounds(idx)) continue;
          const Vec3 c = oc.map.index_to_center(idx);
          if ((c - oc.start_pos).norm() < 2.5 || (c - oc.goal_pos).norm() < 2.5)
            too_close = true;
        }
    if (too_close) continue;
    for (int dz = 0; dz < ext.z(); ++dz)
      for (int dy = 0; dy < ext.y(); ++dy)
        for (int dx = 0; dx < ext.x(); ++dx) {
          const Eigen::Vector3i idx = base + Eigen::Vector3i(dx, dy, dz);
          if (oc.map.index_in_bounds(idx)) oc.map.mark_occupied(idx);
        }
  }
  return oc;
}

}  // namespace fastnav::verify
