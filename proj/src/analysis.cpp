#include "fastnav/analysis.hpp"

#include <cmath>
#include <limits>

namespace fastnav {

namespace {

template <typename F>
void for_window(const MissionLog& log, double t_begin, double t_end, F&& f) {
  for (const auto& r : log.records) {
    if (r.t < t_begin || r.t > t_end) continue;
    f(r);
  }
}

}  // namespace

double mean_along_track_lag(const MissionLog& log, const Vec3& dir, double t_begin,
                            double t_end) {
  const Vec3 d = dir.normalized();
  double sum = 0.0;
  std::size_t n = 0;
  for_window(log, t_begin, t_end, [&](const ControlRecord& r) {
    sum += (r.ref_pos - r.true_pos).dot(d);
    ++n;
  });
  return n ? sum / static_cast<double>(n) : 0.0;
}

double mean_true_speed(const MissionLog& log, double t_begin, double t_end) {
  double sum = 0.0;
  std::size_t n = 0;
  for_window(log, t_begin, t_end, [&](const ControlRecord& r) {
    sum += r.true_vel.norm();
    ++n;
  });
  return n ? sum / static_cast<double>(n) : 0.0;
}

double max_abs_altitude_error(const MissionLog& log, double t_begin, double t_end) {
  double worst = 0.0;
  for_window(log, t_begin, t_end, [&](const ControlRecord& r) {
    worst = std::max(worst, std::abs(r.true_pos.z() - r.ref_pos.z()));
  });
  return worst;
}

double max_tracking_error(const MissionLog& log) {
  double worst = 0.0;
  for (const auto& r : log.records) worst = std::max(worst, r.tracking_error);
  return worst;
}

bool altitude_monotone_nonincreasing(const MissionLog& log, double t_begin, double t_end,
                                     double tol) {
  double last = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& r : log.records) {
    if (r.t < t_begin || r.t > t_end) continue;
    any = true;
    if (r.true_pos.z() > last + tol) return false;
    last = std::min(last, r.true_pos.z());
  }
  return any;
}

double first_time_speed_above(const MissionLog& log, double threshold) {
  for (const auto& r : log.records) {
    if (r.true_vel.norm() >= threshold) return r.t;
  }
  return -1.0;
}

double final_distance_to(const MissionLog& log, const Vec3& target) {
  if (log.records.empty()) return std::numeric_limits<double>::infinity();
  return (log.records.back().true_pos - target).norm();
}

double max_swap_pos_jump(const MissionLog& log) {
  double worst = 0.0;
  for (const auto& e : log.events) {
    if (e.type == "plan" || e.type == "estop") worst = std::max(worst, e.swap_pos_jump);
  }
  return worst;
}

double max_swap_vel_jump(const MissionLog& log) {
  double worst = 0.0;
  for (const auto& e : log.events) {
    if (e.type == "plan" || e.type == "estop") worst = std::max(worst, e.swap_vel_jump);
  }
  return worst;
}

int count_events(const MissionLog& log, const std::string& type) {
  int n = 0;
  for (const auto& e : log.events) {
    if (e.type == type) ++n;
  }
  return n;
}

std::vector<Vec3> plane_crossings(const MissionLog& log, int axis, double coord) {
  std::vector<Vec3> out;
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    const Vec3& a = log.records[i - 1].true_pos;
    const Vec3& b = log.records[i].true_pos;
    const double fa = a[axis] - coord;
    const double fb = b[axis] - coord;
    if (fa == 0.0) continue;  // counted when the previous interval crossed
    if ((fa < 0.0 && fb >= 0.0) || (fa > 0.0 && fb <= 0.0)) {
      const double s = fa / (fa - fb);
      out.push_back(a + s * (b - a));
    }
  }
  return out;
}

bool path_enters_box(const MissionLog& log, const Box& box) {
  for (const auto& r : log.records) {
    if (box.contains(r.true_pos)) return true;
  }
  return false;
}

double total_path_length(const MissionLog& log) {
  double len = 0.0;
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    len += (log.records[i].true_pos - log.records[i - 1].true_pos).norm();
  }
  return len;
}

}  // namespace fastnav
