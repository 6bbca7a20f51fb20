#include "fastnav/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace fastnav {

Vec3 PolySegment::eval(double s, int deriv) const {
  Vec3 out = Vec3::Zero();
  const int n = order();
  if (deriv > n) return out;
  for (int axis = 0; axis < 3; ++axis) {
    // Horner over the differentiated coefficients c_k * k!/(k-m)!.
    double acc = 0.0;
    for (int k = n; k >= deriv; --k) {
      double fall = 1.0;
      for (int j = 0; j < deriv; ++j) fall *= static_cast<double>(k - j);
      acc = acc * s + coeffs[axis][static_cast<std::size_t>(k)] * fall;
    }
    out[axis] = acc;
  }
  return out;
}

PolySegment PolySegment::constant(const Vec3& value, double duration) {
  PolySegment seg;
  for (int axis = 0; axis < 3; ++axis) seg.coeffs[axis] = {value[axis]};
  seg.duration = duration;
  return seg;
}

double PolyTrajectory::total_duration() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration;
  return total;
}

Vec3 poly_eval(const PolyTrajectory& traj, double t, int deriv_order) {
  if (deriv_order < 0) throw std::invalid_argument("poly_eval: negative derivative order");
  if (traj.segments.empty()) throw std::out_of_range("poly_eval: empty trajectory");
  const double total = traj.total_duration();
  constexpr double kSlack = 1e-9;
  if (t < -kSlack || t > total + kSlack) {
    throw std::out_of_range("poly_eval: t outside [0, total_duration]");
  }
  t = std::clamp(t, 0.0, total);

  // Walk to the segment owning t; exact joint values belong to the later
  // segment, so advance while t reaches a boundary and segments remain.
  std::size_t i = 0;
  double local = t;
  while (i + 1 < traj.segments.size() && local >= traj.segments[i].duration) {
    local -= traj.segments[i].duration;
    ++i;
  }
  local = std::min(local, traj.segments[i].duration);
  return traj.segments[i].eval(local, deriv_order);
}

}  // namespace fastnav
