#pragma once

#include <array>
#include <vector>

#include "fastnav/types.hpp"

namespace fastnav {

// One polynomial piece. Coefficients are stored per axis in LOCAL segment
// time s = t - segment_start, ascending power, so long missions do not lose
// precision to huge powers of absolute time. All three axes share one order.
struct PolySegment {
  std::array<std::vector<double>, 3> coeffs;
  double duration{0.0};

  int order() const { return static_cast<int>(coeffs[0].size()) - 1; }

  // Value of the deriv-th derivative at local time s.
  Vec3 eval(double s, int deriv) const;

  static PolySegment constant(const Vec3& value, double duration);
};

struct PolyTrajectory {
  std::vector<PolySegment> segments;
  double start_time{0.0};

  double total_duration() const;
  bool empty() const { return segments.empty(); }
};

// Derivative of the trajectory at time t since trajectory start,
// t in [0, total_duration] (a slack of 1e-9 is absorbed by clamping, anything
// further out throws std::out_of_range). At an interior joint the later
// segment wins.
Vec3 poly_eval(const PolyTrajectory& traj, double t, int deriv_order);

}  // namespace fastnav
