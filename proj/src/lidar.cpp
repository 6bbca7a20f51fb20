#include "fastnav/lidar.hpp"

#include <cmath>

namespace fastnav {

double gimbal_angle(double t, const LidarParams& p) {
  if (p.nod_amplitude == 0.0) return 0.0;
  return p.nod_amplitude * std::sin(2.0 * M_PI * t / p.nod_period);
}

std::vector<Vec3> simulate_scan(const GroundTruthEnv& env, const RobotState& state,
                                double t, const LidarParams& p) {
  const double nod = gimbal_angle(t, p);
  const Mat3 mount =
      (Eigen::AngleAxisd(p.mount_rpy.z(), Vec3::UnitZ()) *
       Eigen::AngleAxisd(p.mount_rpy.y(), Vec3::UnitY()) *
       Eigen::AngleAxisd(p.mount_rpy.x(), Vec3::UnitX()))
          .toRotationMatrix();
  // Positive nod pitches the fan downward (x axis toward -z).
  const Mat3 sensor_from_fan = Eigen::AngleAxisd(nod, Vec3::UnitY()).toRotationMatrix();
  const Mat3 world_from_fan = state.rot.matrix() * mount * sensor_from_fan;
  const Vec3 origin = state.pos + state.rot * p.mount_offset;

  const int beams = static_cast<int>(std::floor(p.fov / p.angular_resolution + 1e-9)) + 1;
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(beams));
  for (int i = 0; i < beams; ++i) {
    const double bearing = -0.5 * p.fov + i * p.angular_resolution;
    const Vec3 dir_fan(std::cos(bearing), std::sin(bearing), 0.0);
    const Vec3 dir = world_from_fan * dir_fan;
    if (auto hit = raycast(env, origin, dir, p.max_range)) {
      points.push_back(origin + *hit * dir);
    }
  }
  return points;
}

}  // namespace fastnav
