#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>

namespace fastnav {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravity = 9.80665;  // m/s^2

// Commanded attitude would need an almost-horizontal thrust axis past this.
inline constexpr double kMaxTiltRad = 89.0 * M_PI / 180.0;

struct DegenerateAttitudeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

// World-from-body rotation. Construction through from_matrix validates
// orthonormality and det = +1 to 1e-9; composition of valid rotations is
// trusted and not re-checked.
class Rotation {
 public:
  Rotation() : mat_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }
  static Rotation from_matrix(const Mat3& m);
  static Rotation from_quaternion(const Eigen::Quaterniond& q);
  // Skips validation; caller guarantees orthonormality.
  static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m); }

  const Mat3& matrix() const { return mat_; }
  Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(mat_); }

  Vec3 operator*(const Vec3& v) const { return mat_ * v; }
  Rotation operator*(const Rotation& o) const { return Rotation(mat_ * o.mat_); }
  Rotation inverse() const { return Rotation(mat_.transpose()); }

  Vec3 body_x() const { return mat_.col(0); }
  Vec3 body_y() const { return mat_.col(1); }
  Vec3 body_z() const { return mat_.col(2); }

  // Geodesic angle to another rotation, radians in [0, pi].
  double angle_to(const Rotation& o) const;

  // Slerp toward target by fraction in [0, 1]; 0 keeps *this, 1 lands on
  // target exactly.
  Rotation rotated_toward(const Rotation& target, double fraction) const;

  // Tilt of the body z axis away from world z, radians.
  double tilt() const;

 private:
  explicit Rotation(const Mat3& m) : mat_(m) {}
  Mat3 mat_;
};

struct RobotState {
  Vec3 pos{Vec3::Zero()};   // m, world
  Vec3 vel{Vec3::Zero()};   // m/s, world
  Rotation rot;             // world-from-body
  double time{0.0};         // s
};

struct FlatReference {
  Vec3 pos{Vec3::Zero()};   // m
  Vec3 vel{Vec3::Zero()};   // m/s
  Vec3 acc{Vec3::Zero()};   // m/s^2
  Vec3 jerk{Vec3::Zero()};  // m/s^3
  double yaw{0.0};          // rad, [-pi, pi)
};

// Builds the full attitude whose third body axis is b3 (unit) and whose first
// body axis is the unit projection of (cos yaw, sin yaw, 0) onto the plane
// normal to b3. Throws DegenerateAttitudeError when b3 tilts 89 degrees or
// more from world z, std::invalid_argument when b3 is not unit length.
Rotation rotation_from_z_and_yaw(const Vec3& b3, double yaw);

}  // namespace fastnav
