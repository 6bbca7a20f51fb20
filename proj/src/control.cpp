#include "fastnav/control.hpp"

#include <cmath>
#include <stdexcept>

namespace fastnav {

Vec3 drag_force(const Rotation& R, const Vec3& v, double k_d) {
  const Mat3& m = R.matrix();
  const Vec3 body = m.transpose() * v;
  const Vec3 planar(body.x(), body.y(), 0.0);
  return -k_d * (m * planar);
}

Vec3 desired_force(const RobotState& state, const FlatReference& ref,
                   const ControlParams& p) {
  const Vec3 e_x = state.pos - ref.pos;
  const Vec3 e_v = state.vel - ref.vel;
  Vec3 f = p.mass * (-p.k_x * e_x - p.k_v * e_v + ref.acc + p.g * Vec3::UnitZ());
  if (p.drag_comp) f += p.k_d * state.vel;
  return f;
}

Command control_step(const RobotState& state, const FlatReference& ref,
                     const ControlParams& p) {
  const Vec3 f = desired_force(state, ref, p);
  const double norm = f.norm();
  if (norm < 1e-9) {
    throw std::runtime_error("control_step: desired force vanished");
  }
  Command cmd;
  cmd.orientation = rotation_from_z_and_yaw(f / norm, ref.yaw);
  cmd.thrust = std::clamp(f.dot(state.rot.body_z()), 0.0, p.f_max);
  return cmd;
}

}  // namespace fastnav
