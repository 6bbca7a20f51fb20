#pragma once

#include <vector>

#include "fastnav/env.hpp"
#include "fastnav/types.hpp"

namespace fastnav {

// Planar range scanner on a one-axis nodding mount. Angles in radians.
struct LidarParams {
  double max_range = 30.0;
  double angular_resolution = 0.25 * M_PI / 180.0;
  double fov = 270.0 * M_PI / 180.0;
  double scan_rate = 40.0;                  // Hz
  double nod_amplitude = 30.0 * M_PI / 180.0;
  double nod_period = 2.0;                  // s
  Vec3 mount_offset = Vec3::Zero();         // sensor position in body frame, m
  Vec3 mount_rpy = Vec3::Zero();            // fixed mount rotation, rad
};

// Nod pitch at time t: amplitude * sin(2*pi*t/period). Zero amplitude pins
// the scan plane horizontal.
double gimbal_angle(double t, const LidarParams& p);

// One instantaneous fan of rays in the nodded sensor plane, traced against
// the ground-truth world and returned as world-frame hit points. Misses are
// omitted. Bearings run from -fov/2 to +fov/2 in angular_resolution steps.
std::vector<Vec3> simulate_scan(const GroundTruthEnv& env, const RobotState& state,
                                double t, const LidarParams& p);

}  // namespace fastnav
