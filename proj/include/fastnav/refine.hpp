#pragma once

#include <vector>

#include "fastnav/planner.hpp"
#include "fastnav/poly.hpp"
#include "fastnav/types.hpp"

namespace fastnav {

struct RefineParams {
  int order = 7;             // polynomial order per segment
  int continuity_order = 3;  // derivatives kept continuous at joints (and pinned at ends)
  int minimized_order = 4;   // derivative whose squared integral is minimized

  void validate() const;  // throws std::invalid_argument
};

struct EndpointState {
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
  Vec3 acc{Vec3::Zero()};
  Vec3 jerk{Vec3::Zero()};
};

struct FitDiagnostics {
  double rcond = 0.0;  // reciprocal condition estimate of the solve
};

// Segment-boundary positions and cumulative times of a primitive chain;
// n primitives yield n+1 waypoints. Throws std::invalid_argument when the
// chain is empty.
std::pair<std::vector<Vec3>, std::vector<double>> extract_waypoints(
    const PrimitiveTrajectory& traj);

// Per-axis piecewise polynomial minimizing the integral of the squared
// minimized_order-th derivative subject to: waypoint interpolation, the full
// boundary states at both ends (derivatives 1..continuity_order; positions
// come from the waypoint list and must match the endpoint states), and joint
// continuity through continuity_order. One factorization serves all three
// axes. Segment times are normalized to [0,1] inside the solve for
// conditioning; a degenerate system raises std::runtime_error.
PolyTrajectory fit_polynomial(const std::vector<Vec3>& positions,
                              const std::vector<double>& times,
                              const EndpointState& start_state,
                              const EndpointState& end_state,
                              const RefineParams& params,
                              FitDiagnostics* diag = nullptr);

// Largest positional distance between the two trajectories, sampled every dt
// including both endpoints. Total durations must agree within 1e-9.
double max_deviation(const PrimitiveTrajectory& prim, const PolyTrajectory& poly,
                     double dt);

}  // namespace fastnav
