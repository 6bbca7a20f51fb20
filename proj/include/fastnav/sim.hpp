#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "fastnav/control.hpp"
#include "fastnav/env.hpp"
#include "fastnav/lidar.hpp"
#include "fastnav/planner.hpp"
#include "fastnav/poly.hpp"
#include "fastnav/refine.hpp"
#include "fastnav/types.hpp"
#include "fastnav/voxel_map.hpp"

namespace fastnav {

enum class AttitudeMode { kIdeal, kFirstOrder };

// Where the plant's velocity-proportional drag acts. The horizontal model
// keeps drag in the world x-y plane; the body-plane model applies it in the
// vehicle's own x-y plane (the same geometry the controller compensates).
enum class DragModel { kWorldHorizontal, kBodyPlane };

struct VehicleParams {
  double mass = 1.5;      // kg
  double k_d = 0.3;       // kg/s
  double f_max = 2.0 * 1.5 * kGravity;  // N
  double tau_att = 0.1;   // s, first-order attitude lag
  AttitudeMode attitude_mode = AttitudeMode::kFirstOrder;
  DragModel drag_model = DragModel::kWorldHorizontal;
};

struct NoiseParams {
  double sigma_pos = 0.0;  // m
  double sigma_vel = 0.0;  // m/s
  std::uint64_t seed = 0;
};

struct RateConfig {
  double control_hz = 200.0;
  double scan_hz = 40.0;
  double replan_hz = 3.0;
  double substep = 0.001;  // s
};

// Advances the translational state by one RK4 step under a constant command.
// The attitude is held fixed over the step and updated at its end: ideal
// mode snaps to the commanded orientation, first-order mode slerps toward it
// by 1 - exp(-dt/tau_att). Thrust is clamped to [0, f_max].
RobotState dynamics_step(const RobotState& state, const Command& cmd, double dt,
                         const VehicleParams& vp);

// State as the control loop sees it: Gaussian position/velocity perturbation.
// Zero sigmas return the input without consuming randomness.
RobotState estimate(const RobotState& state, const NoiseParams& np,
                    std::mt19937_64& rng);

enum class YawPolicy { kFixed, kVelocityAligned };

// Reference trajectory anchored at absolute time t0 and held at its final
// position afterwards. Before t0 it pins the initial state.
struct ReferenceTimeline {
  PolyTrajectory traj;
  double t0 = 0.0;
  double fixed_yaw = 0.0;
  YawPolicy yaw_policy = YawPolicy::kFixed;

  FlatReference at(double t) const;
  double end_time() const { return t0 + traj.total_duration(); }
};

// Exact quadratic-segment rendering of a primitive chain.
PolyTrajectory poly_from_chain(const PrimitiveTrajectory& chain);

// Constant-deceleration segment bringing vel to zero at accel magnitude
// a_brake, appended in place (no-op for tiny speeds).
void append_brake_segment(PolyTrajectory& traj, const Vec3& end_pos, const Vec3& end_vel,
                          double a_brake);

// Straight-line ramp / cruise / ramp profile from p0 along a unit direction.
// Falls back to a triangular profile when the length cannot fit the cruise.
PolyTrajectory make_trapezoid_profile(const Vec3& p0, const Vec3& dir, double length,
                                      double cruise_speed, double accel);

enum class MissionType { kGoal, kLine };

enum class ReplanSource { kReference, kEstimate };

struct LineProfile {
  Vec3 direction = Vec3::UnitX();  // normalized on use
  double length = 100.0;           // m
  double cruise_speed = 10.0;      // m/s
  double ramp_accel = 2.5;         // m/s^2
};

struct MissionConfig {
  GroundTruthEnv env;
  Vec3 start_pos{Vec3::Zero()};
  Vec3 start_vel{Vec3::Zero()};
  double start_yaw = 0.0;
  Vec3 goal_pos{Vec3::Zero()};
  double goal_tolerance = 1.0;
  double robot_radius = 0.3;
  double map_resolution = 0.5;
  MissionType type = MissionType::kGoal;
  LineProfile line;
  bool scan_enabled = true;
  YawPolicy yaw_policy = YawPolicy::kFixed;
  ReplanSource replan_source = ReplanSource::kReference;
  double timeout = 120.0;  // s
  double settle_time = 2.0;  // extra tail after a line profile ends, s

  LidarParams lidar;
  PlannerParams planner;
  RefineParams refine;
  ControlParams control;
  VehicleParams vehicle;
  NoiseParams noise;
  RateConfig rates;
};

enum class MissionOutcome { kReachedGoal, kTimeout, kCollision, kAborted };

const char* to_string(MissionOutcome o);

struct ControlRecord {
  double t;
  Vec3 true_pos, true_vel;
  Vec3 est_pos, est_vel;
  Vec3 ref_pos, ref_vel, ref_acc;
  double thrust;
  double tilt_deg;
  double tracking_error;
  int plan_id;
};

// One row per planner interaction or mission-level event. Numeric fields
// not meaningful for a given event type hold zero.
struct PlannerEvent {
  int plan_id = 0;
  double t = 0.0;
  std::string type;    // plan | estop | fallback | collision | goal | timeout
  std::string status;  // planner status or free-form detail
  double cost = 0.0;
  int expansions = 0;
  int primitives = 0;
  double max_dev = 0.0;
  int used_refined = 0;
  double swap_pos_jump = 0.0;
  double swap_vel_jump = 0.0;
};

struct MissionLog {
  std::vector<ControlRecord> records;
  std::vector<PlannerEvent> events;
  MissionOutcome outcome = MissionOutcome::kTimeout;
  std::string failure_reason;
  double end_time = 0.0;
  std::size_t map_occupied = 0;
  int plans_attempted = 0;
  int estop_count = 0;
  int fallback_count = 0;
};

// Deterministic closed-loop run: per control tick, scan insert -> replan if
// due -> control -> physics substeps. Replans seed from the reference state
// at the swap instant by default.
MissionLog run_mission(const MissionConfig& cfg);

// Fixed %.17g formatting so equal doubles always serialize identically.
void write_log_csv(const MissionLog& log, std::ostream& os);
void write_events_csv(const MissionLog& log, std::ostream& os);

// Sweeps a burst of scans at a standing pose across one full nod period so
// single-shot planning has map coverage comparable to a short hover.
void scan_burst(VoxelMap& map, const GroundTruthEnv& env, const RobotState& state,
                const LidarParams& lidar);

}  // namespace fastnav
