#include "fastnav/types.hpp"

#include <cmath>

namespace fastnav {

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w >= M_PI) w -= 2.0 * M_PI;  // remainder returns [-pi, pi]; fold +pi
  return w;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  const double ortho_err = (m.transpose() * m - Mat3::Identity()).norm();
  if (ortho_err > 1e-9) {
    throw std::invalid_argument("Rotation::from_matrix: matrix not orthonormal");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-9) {
    throw std::invalid_argument("Rotation::from_matrix: determinant is not +1");
  }
  return Rotation(m);
}

Rotation Rotation::from_quaternion(const Eigen::Quaterniond& q) {
  return Rotation(q.normalized().toRotationMatrix());
}

double Rotation::angle_to(const Rotation& o) const {
  Eigen::AngleAxisd aa(mat_.transpose() * o.mat_);
  return std::abs(aa.angle());
}

Rotation Rotation::rotated_toward(const Rotation& target, double fraction) const {
  if (fraction <= 0.0) return *this;
  if (fraction >= 1.0) return target;
  Eigen::Quaterniond qa(mat_);
  Eigen::Quaterniond qb(target.mat_);
  return Rotation(qa.slerp(fraction, qb).toRotationMatrix());
}

double Rotation::tilt() const {
  const double cz = std::clamp(mat_(2, 2), -1.0, 1.0);
  return std::acos(cz);
}

Rotation rotation_from_z_and_yaw(const Vec3& b3, double yaw) {
  if (std::abs(b3.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("rotation_from_z_and_yaw: b3 must be unit length");
  }
  const double cz = std::clamp(b3.z(), -1.0, 1.0);
  if (std::acos(cz) >= kMaxTiltRad) {
    throw DegenerateAttitudeError("rotation_from_z_and_yaw: tilt >= 89 deg");
  }
  const Vec3 heading(std::cos(yaw), std::sin(yaw), 0.0);
  Vec3 b1 = heading - heading.dot(b3) * b3;
  // With tilt < 89 deg the projection cannot vanish: the heading is
  // horizontal while b3 stays more than a degree away from horizontal.
  b1.normalize();
  const Vec3 b2 = b3.cross(b1);
  Mat3 m;
  m.col(0) = b1;
  m.col(1) = b2;
  m.col(2) = b3;
  return Rotation::from_matrix_unchecked(m);
}

}  // namespace fastnav
