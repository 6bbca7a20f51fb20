#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fastnav/env.hpp"
#include "fastnav/lidar.hpp"
#include "fastnav/voxel_map.hpp"

using namespace fastnav;

namespace {

GroundTruthEnv open_env(double half) {
  GroundTruthEnv env;
  env.bounds.min = Vec3(-half, -half, -half);
  env.bounds.max = Vec3(half, half, half);
  return env;
}

// Distance from an interior point to the nearest obstacle or bounds face,
// used to accept "at the surface" answers in the raycast property below.
double surface_proximity(const GroundTruthEnv& env, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : env.boxes) best = std::min(best, b.distance(p));
  for (const auto& c : env.cylinders) best = std::min(best, c.distance(p));
  for (int a = 0; a < 3; ++a) {
    best = std::min(best, std::abs(p[a] - env.bounds.min[a]));
    best = std::min(best, std::abs(env.bounds.max[a] - p[a]));
  }
  return best;
}

}  // namespace

TEST_SUITE("world") {

TEST_CASE("box and cylinder distances") {
  Box b{Vec3(0, 0, 0), Vec3(2, 2, 2)};
  CHECK(b.distance(Vec3(1, 1, 1)) == 0.0);
  CHECK(b.distance(Vec3(3, 1, 1)) == doctest::Approx(1.0));
  CHECK(b.distance(Vec3(3, 3, 1)) == doctest::Approx(std::sqrt(2.0)));

  Cylinder c{0.0, 0.0, 1.0, 0.0, 2.0};
  CHECK(c.contains(Vec3(0.5, 0, 1)));
  CHECK(!c.contains(Vec3(0.5, 0, 3)));
  CHECK(c.distance(Vec3(2, 0, 1)) == doctest::Approx(1.0));
  CHECK(c.distance(Vec3(0, 0, 3)) == doctest::Approx(1.0));
}

TEST_CASE("raycast hits the documented distances") {
  GroundTruthEnv env = open_env(100.0);

  SUBCASE("nothing within range") {
    CHECK(!raycast(env, Vec3(0, 0, 0), Vec3(1, 0, 0), 10.0).has_value());
  }
  SUBCASE("perpendicular box face three meters out") {
    env.boxes.push_back(Box{Vec3(3, -2, -2), Vec3(5, 2, 2)});
    auto hit = raycast(env, Vec3(0, 0, 0), Vec3(1, 0, 0), 30.0);
    REQUIRE(hit.has_value());
    CHECK(*hit == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("cylinder through its axis") {
    env.cylinders.push_back(Cylinder{5.0, 0.0, 1.0, -10.0, 10.0});
    auto hit = raycast(env, Vec3(0, 0, 0), Vec3(1, 0, 0), 30.0);
    REQUIRE(hit.has_value());
    CHECK(*hit == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("bounds act as a solid shell") {
    auto hit = raycast(env, Vec3(0, 0, 0), Vec3(1, 0, 0), 200.0);
    REQUIRE(hit.has_value());
    CHECK(*hit == doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("origin inside an obstacle or outside bounds returns zero") {
    env.boxes.push_back(Box{Vec3(-1, -1, -1), Vec3(1, 1, 1)});
    CHECK(raycast(env, Vec3(0, 0, 0), Vec3(1, 0, 0), 10.0) == 0.0);
    CHECK(raycast(env, Vec3(200, 0, 0), Vec3(1, 0, 0), 10.0) == 0.0);
  }
  SUBCASE("rejects bad arguments") {
    CHECK_THROWS_AS(raycast(env, Vec3(0, 0, 0), Vec3(1, 1, 0), 10.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(raycast(env, Vec3(0, 0, 0), Vec3(1, 0, 0), 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("raycast brackets the surface on random worlds") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int world = 0; world < 20; ++world) {
    GroundTruthEnv env;
    env.bounds.min = Vec3(0, 0, 0);
    env.bounds.max = Vec3(20, 20, 20);
    for (int i = 0; i < 5; ++i) {
      Vec3 lo(1 + 15 * u01(rng), 1 + 15 * u01(rng), 1 + 15 * u01(rng));
      Vec3 ext(0.5 + 2 * u01(rng), 0.5 + 2 * u01(rng), 0.5 + 2 * u01(rng));
      env.boxes.push_back(Box{lo, lo + ext});
    }
    for (int i = 0; i < 5; ++i) {
      env.cylinders.push_back(Cylinder{2 + 16 * u01(rng), 2 + 16 * u01(rng),
                                       0.3 + u01(rng), 0.0, 4 + 14 * u01(rng)});
    }

    for (int shot = 0; shot < 50; ++shot) {
      Vec3 origin;
      do {
        origin = Vec3(20 * u01(rng), 20 * u01(rng), 20 * u01(rng));
      } while (env.occupied(origin));
      const double az = 2 * M_PI * u01(rng), el = std::acos(2 * u01(rng) - 1);
      const Vec3 dir(std::sin(el) * std::cos(az), std::sin(el) * std::sin(az),
                     std::cos(el));
      auto hit = raycast(env, origin, dir, 25.0);
      if (!hit || *hit < 1e-5) continue;
      CHECK(*hit <= 25.0 + 1e-9);
      const double eps = 1e-6;
      CHECK(!env.occupied(origin + (*hit - eps) * dir));
      const Vec3 past = origin + (*hit + eps) * dir;
      CHECK((env.occupied(past) || surface_proximity(env, past) <= 1e-6));
    }
  }
}

TEST_CASE("gimbal angle follows the nod schedule") {
  LidarParams p;
  p.nod_amplitude = 0.4;
  p.nod_period = 2.0;
  CHECK(gimbal_angle(0.0, p) == 0.0);
  CHECK(gimbal_angle(0.5, p) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::abs(gimbal_angle(1.0, p)) < 1e-12);
  CHECK(gimbal_angle(1.5, p) == doctest::Approx(-0.4).epsilon(1e-12));
  p.nod_amplitude = 0.0;
  CHECK(gimbal_angle(0.77, p) == 0.0);
}

TEST_CASE("scan of an empty world returns nothing") {
  GroundTruthEnv env = open_env(1000.0);
  RobotState state;
  LidarParams p;
  CHECK(simulate_scan(env, state, 0.0, p).empty());
}

TEST_CASE("level scan of a wall lands on the wall plane") {
  GroundTruthEnv env = open_env(1000.0);
  env.boxes.push_back(Box{Vec3(3, -80, -80), Vec3(3.3, 80, 80)});
  RobotState state;
  LidarParams p;
  p.nod_amplitude = 0.0;
  const auto points = simulate_scan(env, state, 0.37, p);
  CHECK(points.size() > 600);
  for (const auto& pt : points) {
    CHECK(std::abs(pt.x() - 3.0) <= 1e-6);
    CHECK(std::abs(pt.z()) <= 1e-9);
    CHECK(std::abs(pt.y()) <= 30.0);
  }
}

TEST_CASE("nodding sweeps out a vertical extent") {
  GroundTruthEnv env = open_env(1000.0);
  env.boxes.push_back(Box{Vec3(3, -80, -80), Vec3(3.3, 80, 80)});
  RobotState state;
  LidarParams p;
  double zmin = 1e9, zmax = -1e9;
  for (int k = 0; k < 40; ++k) {
    for (const auto& pt : simulate_scan(env, state, 0.05 * k, p)) {
      zmin = std::min(zmin, pt.z());
      zmax = std::max(zmax, pt.z());
    }
  }
  CHECK(zmax - zmin > 1.0);
}

TEST_CASE("beam count is fov over resolution plus one") {
  GroundTruthEnv env = open_env(5.0);
  RobotState state;
  LidarParams p;
  const auto points = simulate_scan(env, state, 0.0, p);
  const std::size_t beams =
      static_cast<std::size_t>(std::floor(p.fov / p.angular_resolution + 1e-9)) + 1;
  CHECK(beams == 1081);
  // Fully enclosed, so every beam returns.
  CHECK(points.size() == beams);
}

TEST_CASE("voxel map indexing round trips at cell centers") {
  VoxelMap map(Vec3(-1, -2, 0), 0.5, Eigen::Vector3i(8, 10, 6));
  CHECK_THROWS_AS(VoxelMap(Vec3::Zero(), -0.5, Eigen::Vector3i(2, 2, 2)),
                  std::invalid_argument);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dx(0, 7), dy(0, 9), dz(0, 5);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3i idx(dx(rng), dy(rng), dz(rng));
    CHECK(map.world_to_index(map.index_to_center(idx)) == idx);
  }
  CHECK(map.total_voxels() == 8u * 10u * 6u);
  CHECK(!map.world_in_bounds(Vec3(10, 0, 0)));
  CHECK(map.world_in_bounds(Vec3(0, 0, 1)));
}

TEST_CASE("insert_scan marks exactly the voxels containing points") {
  VoxelMap map(Vec3::Zero(), 0.5, Eigen::Vector3i(10, 10, 10));
  map.insert_points({});
  CHECK(map.occupied_count() == 0);

  const Eigen::Vector3i idx(4, 4, 4);
  const Vec3 center = map.index_to_center(idx);
  insert_scan(map, {center});
  CHECK(map.occupied_count() == 1);
  CHECK(map.occupied_at(idx));

  // Idempotent, and out-of-map points are ignored.
  insert_scan(map, {center, center, Vec3(100, 0, 0)});
  CHECK(map.occupied_count() == 1);
}

TEST_CASE("insertion is order independent and monotone") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<Vec3> points;
  for (int i = 0; i < 300; ++i) points.emplace_back(u(rng), u(rng), u(rng));

  VoxelMap a(Vec3::Zero(), 0.5, Eigen::Vector3i(10, 10, 10));
  VoxelMap b = a;
  insert_scan(a, points);
  std::vector<Vec3> shuffled = points;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  insert_scan(b, shuffled);
  CHECK(a.same_occupancy(b));

  const std::size_t before = a.occupied_count();
  insert_scan(a, points);
  CHECK(a.occupied_count() == before);

  // More points only ever add occupancy.
  insert_scan(a, {Vec3(4.9, 4.9, 4.9)});
  for (std::uint64_t lin : b.occupied_history()) {
    CHECK(a.occupied_at(a.index_from_linear(lin)));
  }
}

TEST_CASE("inflated occupancy measures to voxel centers plus half diagonal") {
  VoxelMap map(Vec3::Zero(), 0.5, Eigen::Vector3i(10, 10, 10));
  CHECK(map.half_diagonal() == doctest::Approx(0.25 * std::sqrt(3.0)).epsilon(1e-15));

  CHECK(!is_occupied_inflated(map, Vec3(2, 2, 2), 0.5));

  const Eigen::Vector3i idx(4, 4, 4);
  map.mark_occupied(idx);
  const Vec3 center = map.index_to_center(idx);
  CHECK(is_occupied_inflated(map, center, 0.0));
  CHECK(is_occupied_inflated(map, center + Vec3(0.4, 0, 0), 0.5));
  // Threshold for radius 0.1 sits at 0.1 + half_diagonal = 0.533.
  CHECK(is_occupied_inflated(map, center + Vec3(0.52, 0, 0), 0.1));
  CHECK(!is_occupied_inflated(map, center + Vec3(0.54, 0, 0), 0.1));
}

TEST_CASE("unknown space policy applies outside the grid") {
  VoxelMap map(Vec3::Zero(), 0.5, Eigen::Vector3i(10, 10, 10));
  const Vec3 outside(-2.0, 2.0, 2.0);
  CHECK(!is_occupied_inflated(map, outside, 0.3, UnknownSpace::kFree));
  CHECK(is_occupied_inflated(map, outside, 0.3, UnknownSpace::kOccupied));

  // A real occupied voxel near the border answers regardless of policy.
  map.mark_occupied(Eigen::Vector3i(0, 4, 4));
  const Vec3 near_border = map.index_to_center(Eigen::Vector3i(0, 4, 4)) + Vec3(-0.35, 0, 0);
  CHECK(!map.world_in_bounds(near_border));
  CHECK(is_occupied_inflated(map, near_border, 0.5, UnknownSpace::kFree));
}

TEST_CASE("inflated queries match a brute force scan") {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  VoxelMap map(Vec3::Zero(), 0.5, Eigen::Vector3i(12, 12, 12));

  auto brute = [&](const Vec3& pos, double radius, UnknownSpace unknown) {
    const double reach = radius + map.half_diagonal();
    for (std::uint64_t lin : map.occupied_history()) {
      const Vec3 c = map.index_to_center(map.index_from_linear(lin));
      if ((c - pos).norm() <= reach) return true;
    }
    return !map.world_in_bounds(pos) && unknown == UnknownSpace::kOccupied;
  };

  const std::vector<double> radii = {0.0, 0.3, 0.72};
  for (int round = 0; round < 2; ++round) {
    std::vector<Vec3> points;
    for (int i = 0; i < 200; ++i) points.emplace_back(u(rng), u(rng), u(rng));
    map.insert_points(points);
    for (int q = 0; q < 500; ++q) {
      const Vec3 pos(u(rng) * 1.4 - 1.2, u(rng) * 1.4 - 1.2, u(rng) * 1.4 - 1.2);
      for (double r : radii) {
        CHECK(is_occupied_inflated(map, pos, r, UnknownSpace::kFree) ==
              brute(pos, r, UnknownSpace::kFree));
        CHECK(is_occupied_inflated(map, pos, r, UnknownSpace::kOccupied) ==
              brute(pos, r, UnknownSpace::kOccupied));
      }
    }
  }
}

TEST_CASE("map save and load round trip") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  VoxelMap map(Vec3(-1, 0, 2), 0.25, Eigen::Vector3i(20, 16, 12));
  std::vector<Vec3> points;
  for (int i = 0; i < 150; ++i)
    points.emplace_back(-1 + u(rng), u(rng) * 0.8, 2 + u(rng) * 0.6);
  map.insert_points(points);

  std::ostringstream os;
  map.save(os);
  std::istringstream is(os.str());
  const VoxelMap loaded = VoxelMap::load(is);
  CHECK(loaded.same_occupancy(map));
  CHECK(loaded.resolution() == map.resolution());
  CHECK(loaded.dims() == map.dims());
  CHECK((loaded.origin() - map.origin()).norm() == 0.0);

  std::istringstream bad("not a map");
  CHECK_THROWS_AS(VoxelMap::load(bad), std::runtime_error);
}

TEST_CASE("rasterize_env marks voxels whose centers lie inside obstacles") {
  GroundTruthEnv env;
  env.bounds = Box{Vec3(0, 0, 0), Vec3(4, 4, 4)};
  env.boxes.push_back(Box{Vec3(1, 1, 1), Vec3(2, 2, 2)});
  const VoxelMap map = rasterize_env(env, 0.5);
  CHECK(map.occupied_count() == 8);
  CHECK(map.occupied_at(map.world_to_index(Vec3(1.25, 1.25, 1.25))));
  CHECK(!map.occupied_at(map.world_to_index(Vec3(0.75, 1.25, 1.25))));
}

}  // TEST_SUITE("world")
