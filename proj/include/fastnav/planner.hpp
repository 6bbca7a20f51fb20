#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fastnav/types.hpp"
#include "fastnav/voxel_map.hpp"

namespace fastnav {

struct PlannerParams {
  // Per-axis acceleration choices; symmetric around and including 0. Empty
  // means "derive the default 5-value set from a_max".
  std::vector<double> accel_set;
  double tau = 1.0;              // primitive duration, s
  double v_max = 8.0;            // per-axis velocity bound, m/s
  double a_max = 2.5;            // per-axis acceleration bound, m/s^2
  double rho = 62.5;             // time weight in the edge cost (u^2 + rho) * tau
  double collision_dt = 0.1;     // sampling step inside check_primitive, s
  // Extra inflation while planning so that points between collision samples
  // stay clear at the plain robot radius; 0.5 * v_max * collision_dt bounds
  // the mid-sample excursion. Negative means "derive that default".
  double collision_margin = -1.0;
  double pos_quantum = 0.25;     // state-key position resolution, m
  double vel_quantum = 0.1;      // state-key velocity resolution, m/s
  int max_expansions = 300000;
  // A chain end state counts as "at the goal" only when each velocity axis
  // is inside this band, so missions can hand over to a braking reference.
  double goal_vel_tolerance = 0.7;
  UnknownSpace unknown = UnknownSpace::kFree;

  std::vector<double> effective_accel_set() const;
  double effective_collision_margin() const;
};

// Constant-acceleration segment of fixed duration.
struct Primitive {
  Vec3 start_pos{Vec3::Zero()};
  Vec3 start_vel{Vec3::Zero()};
  Vec3 u{Vec3::Zero()};
  double tau{0.0};

  Vec3 end_pos() const;
  Vec3 end_vel() const;
  // Position / velocity / acceleration at local time s in [0, tau].
  void sample(double s, Vec3& pos, Vec3& vel, Vec3& acc) const;
};

struct PrimitiveTrajectory {
  std::vector<Primitive> primitives;
  double total_cost{0.0};
  double total_duration{0.0};

  bool empty() const { return primitives.empty(); }
  // Piecewise state at time t since trajectory start, clamped to
  // [0, total_duration]; at joints the later primitive is authoritative.
  void state_at(double t, Vec3& pos, Vec3& vel, Vec3& acc) const;
};

// Double-integrator closed form over one segment.
std::pair<Vec3, Vec3> propagate(const Vec3& pos, const Vec3& vel, const Vec3& u, double tau);

// Edge cost (|u|^2 + rho) * tau.
double primitive_cost(const Vec3& u, double tau, double rho);

// True iff every sample at collision_dt (both endpoints included) clears
// is_occupied_inflated at robot_radius plus the planning margin, the grid
// is never left, per-axis |vel| stays within v_max at the endpoints (linear
// velocity makes the interior no worse), and per-axis |u| <= a_max.
bool check_primitive(const Primitive& prim, const VoxelMap& map,
                     const PlannerParams& params, double robot_radius);

// One candidate per element of the input-set cross product, filtered through
// check_primitive; costs attached.
std::vector<std::pair<Primitive, double>> successors(const Vec3& pos, const Vec3& vel,
                                                     const PlannerParams& params,
                                                     const VoxelMap& map,
                                                     double robot_radius);

// rho times a lower bound on the remaining time: the max over axes of the
// exact minimum time for an acceleration- and velocity-bounded double
// integrator to reach the goal interval (position within goal_tolerance,
// final per-axis speed within goal_vel_tolerance). Scaled down by 1e-12 so
// square-root rounding can never tip it above the true cost-to-go.
double heuristic(const Vec3& pos, const Vec3& vel, const Vec3& goal_pos,
                 const PlannerParams& params, double goal_tolerance = 0.0);

enum class PlanStatus {
  kSuccess,
  kNoPath,              // search space exhausted: goal unreachable on this lattice
  kStartInCollision,
  kMaxExpansionsReached // budget hit before exhaustion; unreachable not proven
};

const char* to_string(PlanStatus s);

struct PlanResult {
  PlanStatus status{PlanStatus::kNoPath};
  PrimitiveTrajectory trajectory;
  int expansions{0};
  bool ok() const { return status == PlanStatus::kSuccess; }
};

// A* over the quantized (position, velocity) lattice. Deterministic: ties
// break on lower f, then lower h, then lexicographic state key. Nodes may be
// re-opened, which keeps returned costs exactly minimal even when floating
// point rounding dents the heuristic's consistency by an ulp.
PlanResult plan(const Vec3& start_pos, const Vec3& start_vel, const Vec3& goal_pos,
                double goal_tolerance, const VoxelMap& map, const PlannerParams& params,
                double robot_radius);

// Shared by the planner and the verification oracle so both search the same
// graph: quantized state key and the goal predicate.
struct StateKey {
  std::int32_t v[6];
  bool operator==(const StateKey& o) const;
  bool operator<(const StateKey& o) const;  // lexicographic
};
StateKey make_state_key(const Vec3& pos, const Vec3& vel, const PlannerParams& params);
bool goal_reached(const Vec3& pos, const Vec3& vel, const Vec3& goal_pos,
                  double goal_tolerance, const PlannerParams& params);

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const;
};

}  // namespace fastnav
