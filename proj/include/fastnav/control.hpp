#pragma once

#include "fastnav/types.hpp"

namespace fastnav {

struct ControlParams {
  double k_x = 1.0;        // position gain per unit mass, 1/s^2
  double k_v = 1.8;        // velocity gain per unit mass, 1/s
  double k_d = 0.3;        // drag constant, kg/s
  double mass = 1.5;       // kg
  double g = kGravity;     // m/s^2
  double f_max = 2.0 * 1.5 * kGravity;  // N
  bool drag_comp = true;
};

struct Command {
  double thrust = 0.0;  // N, along body z, in [0, f_max]
  Rotation orientation; // desired world-from-body attitude
};

// Velocity-proportional drag restricted to the body x-y plane, expressed in
// the world frame: -k_d * R * diag(1,1,0) * R^T * v. Always orthogonal to
// the body z axis.
Vec3 drag_force(const Rotation& R, const Vec3& v, double k_d);

// Total desired force the thrust vector has to supply:
//   m * (-k_x e_x - k_v e_v + a_ref + g z) [+ k_d v when compensating drag]
// with e_x = pos - ref.pos, e_v = vel - ref.vel.
Vec3 desired_force(const RobotState& state, const FlatReference& ref,
                   const ControlParams& p);

// Attitude setpoint whose body z carries the desired force, thrust equal to
// the desired force projected onto the CURRENT body z, clamped to
// [0, f_max]. Throws on a vanishing desired force or degenerate tilt.
Command control_step(const RobotState& state, const FlatReference& ref,
                     const ControlParams& p);

}  // namespace fastnav
