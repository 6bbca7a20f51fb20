#pragma once

#include <optional>
#include <vector>

#include "fastnav/types.hpp"

namespace fastnav {

struct Box {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool contains(const Vec3& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
  }
  Vec3 extent() const { return max - min; }
  // Euclidean distance from p to the solid box (0 inside).
  double distance(const Vec3& p) const;
};

// Axis-aligned vertical cylinder, solid between z_min and z_max.
struct Cylinder {
  double cx{0.0};
  double cy{0.0};
  double radius{0.0};
  double z_min{0.0};
  double z_max{0.0};

  bool contains(const Vec3& p) const;
  double distance(const Vec3& p) const;
};

// Ground truth world used by the lidar simulator and collision referee.
// The bounds box is a physical shell: rays hit its inner surface, and the
// volume outside it is solid.
struct GroundTruthEnv {
  Box bounds;
  std::vector<Box> boxes;
  std::vector<Cylinder> cylinders;

  bool inside_bounds(const Vec3& p) const { return bounds.contains(p); }
  // True when p is inside any obstacle or outside the bounds shell.
  bool occupied(const Vec3& p) const;
  // True when a sphere of the given radius centered at p touches an obstacle
  // or pokes outside the bounds shell.
  bool collides_sphere(const Vec3& p, double radius) const;
};

// Distance to the nearest obstacle-or-bounds surface along the ray, or
// nullopt when nothing lies within max_range. An origin inside an obstacle
// (or outside the bounds) returns 0. dir must be unit length.
std::optional<double> raycast(const GroundTruthEnv& env, const Vec3& origin,
                              const Vec3& dir, double max_range);

}  // namespace fastnav
