#pragma once

#include <string>
#include <vector>

#include "fastnav/sim.hpp"
#include "fastnav/types.hpp"

namespace fastnav {

// Metric helpers over a MissionLog. Windows are [t_begin, t_end] on record
// timestamps; records outside the window are ignored.

// Mean of (ref_pos - true_pos) . dir; positive when the vehicle trails the
// reference along dir.
double mean_along_track_lag(const MissionLog& log, const Vec3& dir, double t_begin,
                            double t_end);

double mean_true_speed(const MissionLog& log, double t_begin, double t_end);

double max_abs_altitude_error(const MissionLog& log, double t_begin, double t_end);

double max_tracking_error(const MissionLog& log);

// True when true-state altitude never rises more than tol over the window.
bool altitude_monotone_nonincreasing(const MissionLog& log, double t_begin, double t_end,
                                     double tol);

// First record time with true speed >= threshold, or -1.
double first_time_speed_above(const MissionLog& log, double threshold);

double final_distance_to(const MissionLog& log, const Vec3& target);

// Largest reference discontinuity recorded across trajectory swaps.
double max_swap_pos_jump(const MissionLog& log);
double max_swap_vel_jump(const MissionLog& log);

int count_events(const MissionLog& log, const std::string& type);

// Interpolated true-state crossings of the plane axis = coord, in time order.
std::vector<Vec3> plane_crossings(const MissionLog& log, int axis, double coord);

// True when at least one record position lies inside the box.
bool path_enters_box(const MissionLog& log, const Box& box);

double total_path_length(const MissionLog& log);

}  // namespace fastnav
