#include "fastnav/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fastnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Parameter interval [t0, t1] over which the ray stays inside the slab
// [lo, hi] on one axis. Empty interval when the ray runs parallel outside.
bool slab_interval(double origin, double dir, double lo, double hi,
                   double& t0, double& t1) {
  if (std::abs(dir) < 1e-15) {
    if (origin < lo || origin > hi) return false;
    t0 = -kInf;
    t1 = kInf;
    return true;
  }
  double a = (lo - origin) / dir;
  double b = (hi - origin) / dir;
  if (a > b) std::swap(a, b);
  t0 = a;
  t1 = b;
  return true;
}

// Entry distance of the ray into a solid box, or nullopt. Negative entry
// with positive exit means the origin is inside (callers handle that case
// through contains()).
std::optional<double> ray_box_entry(const Vec3& o, const Vec3& d, const Box& b) {
  double t0 = -kInf, t1 = kInf;
  for (int axis = 0; axis < 3; ++axis) {
    double a0, a1;
    if (!slab_interval(o[axis], d[axis], b.min[axis], b.max[axis], a0, a1)) {
      return std::nullopt;
    }
    t0 = std::max(t0, a0);
    t1 = std::min(t1, a1);
  }
  if (t0 > t1 || t1 < 0.0) return std::nullopt;
  return t0;
}

std::optional<double> ray_cylinder_entry(const Vec3& o, const Vec3& d,
                                         const Cylinder& c) {
  // Interval inside the infinite circle in the x-y plane.
  const double ox = o.x() - c.cx;
  const double oy = o.y() - c.cy;
  const double a = d.x() * d.x() + d.y() * d.y();
  double t0, t1;
  if (a < 1e-15) {
    if (ox * ox + oy * oy > c.radius * c.radius) return std::nullopt;
    t0 = -kInf;
    t1 = kInf;
  } else {
    const double b = ox * d.x() + oy * d.y();
    const double csq = ox * ox + oy * oy - c.radius * c.radius;
    const double disc = b * b - a * csq;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    t0 = (-b - root) / a;
    t1 = (-b + root) / a;
  }
  double z0, z1;
  if (!slab_interval(o.z(), d.z(), c.z_min, c.z_max, z0, z1)) return std::nullopt;
  const double enter = std::max(t0, z0);
  const double exit = std::min(t1, z1);
  if (enter > exit || exit < 0.0) return std::nullopt;
  return enter;
}

// Distance at which the ray leaves the bounds box from inside.
double ray_bounds_exit(const Vec3& o, const Vec3& d, const Box& b) {
  double t1 = kInf;
  for (int axis = 0; axis < 3; ++axis) {
    double a0, a1;
    if (!slab_interval(o[axis], d[axis], b.min[axis], b.max[axis], a0, a1)) {
      return 0.0;
    }
    t1 = std::min(t1, a1);
  }
  return std::max(t1, 0.0);
}

}  // namespace

double Box::distance(const Vec3& p) const {
  Vec3 clamped;
  for (int axis = 0; axis < 3; ++axis) {
    clamped[axis] = std::clamp(p[axis], min[axis], max[axis]);
  }
  return (p - clamped).norm();
}

bool Cylinder::contains(const Vec3& p) const {
  if (p.z() < z_min || p.z() > z_max) return false;
  const double dx = p.x() - cx;
  const double dy = p.y() - cy;
  return dx * dx + dy * dy <= radius * radius;
}

double Cylinder::distance(const Vec3& p) const {
  const double dx = p.x() - cx;
  const double dy = p.y() - cy;
  const double radial = std::max(0.0, std::sqrt(dx * dx + dy * dy) - radius);
  double vertical = 0.0;
  if (p.z() < z_min) {
    vertical = z_min - p.z();
  } else if (p.z() > z_max) {
    vertical = p.z() - z_max;
  }
  return std::hypot(radial, vertical);
}

bool GroundTruthEnv::occupied(const Vec3& p) const {
  if (!bounds.contains(p)) return true;
  for (const auto& b : boxes) {
    if (b.contains(p)) return true;
  }
  for (const auto& c : cylinders) {
    if (c.contains(p)) return true;
  }
  return false;
}

bool GroundTruthEnv::collides_sphere(const Vec3& p, double radius) const {
  for (int axis = 0; axis < 3; ++axis) {
    if (p[axis] - radius < bounds.min[axis] || p[axis] + radius > bounds.max[axis]) {
      return true;
    }
  }
  for (const auto& b : boxes) {
    if (b.distance(p) <= radius) return true;
  }
  for (const auto& c : cylinders) {
    if (c.distance(p) <= radius) return true;
  }
  return false;
}

std::optional<double> raycast(const GroundTruthEnv& env, const Vec3& origin,
                              const Vec3& dir, double max_range) {
  if (std::abs(dir.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("raycast: dir must be unit length");
  }
  if (max_range <= 0.0) {
    throw std::invalid_argument("raycast: max_range must be positive");
  }
  if (env.occupied(origin)) return 0.0;

  double best = ray_bounds_exit(origin, dir, env.bounds);
  for (const auto& b : env.boxes) {
    if (auto t = ray_box_entry(origin, dir, b); t && *t < best) best = std::max(*t, 0.0);
  }
  for (const auto& c : env.cylinders) {
    if (auto t = ray_cylinder_entry(origin, dir, c); t && *t < best) best = std::max(*t, 0.0);
  }
  if (best > max_range) return std::nullopt;
  return best;
}

}  // namespace fastnav
