#include "fastnav/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fastnav {

namespace {

Vec3 plant_accel(const Vec3& vel, double thrust, const Rotation& rot,
                 const VehicleParams& vp) {
  Vec3 a = (thrust / vp.mass) * rot.body_z() - kGravity * Vec3::UnitZ();
  if (vp.drag_model == DragModel::kWorldHorizontal) {
    const double c = vp.k_d / vp.mass;
    a.x() -= c * vel.x();
    a.y() -= c * vel.y();
  } else {
    a += drag_force(rot, vel, vp.k_d) / vp.mass;
  }
  return a;
}

}  // namespace

RobotState dynamics_step(const RobotState& state, const Command& cmd, double dt,
                         const VehicleParams& vp) {
  if (dt <= 0.0) throw std::invalid_argument("dynamics_step: dt must be positive");
  const double thrust = std::clamp(cmd.thrust, 0.0, vp.f_max);
  const auto accel = [&](const Vec3& v) { return plant_accel(v, thrust, state.rot, vp); };

  const Vec3 k1v = accel(state.vel);
  const Vec3 k1p = state.vel;
  const Vec3 v2 = state.vel + 0.5 * dt * k1v;
  const Vec3 k2v = accel(v2);
  const Vec3 k2p = v2;
  const Vec3 v3 = state.vel + 0.5 * dt * k2v;
  const Vec3 k3v = accel(v3);
  const Vec3 k3p = v3;
  const Vec3 v4 = state.vel + dt * k3v;
  const Vec3 k4v = accel(v4);
  const Vec3 k4p = v4;

  RobotState out = state;
  out.pos += (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  out.vel += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.time += dt;
  if (vp.attitude_mode == AttitudeMode::kIdeal) {
    out.rot = cmd.orientation;
  } else {
    out.rot = state.rot.rotated_toward(cmd.orientation, 1.0 - std::exp(-dt / vp.tau_att));
  }
  return out;
}

RobotState estimate(const RobotState& state, const NoiseParams& np, std::mt19937_64& rng) {
  if (np.sigma_pos == 0.0 && np.sigma_vel == 0.0) return state;
  RobotState out = state;
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int axis = 0; axis < 3; ++axis) out.pos[axis] += np.sigma_pos * n01(rng);
  for (int axis = 0; axis < 3; ++axis) out.vel[axis] += np.sigma_vel * n01(rng);
  return out;
}

FlatReference ReferenceTimeline::at(double t) const {
  FlatReference ref;
  ref.yaw = fixed_yaw;
  if (traj.empty()) return ref;
  const double total = traj.total_duration();
  const double local = t - t0;
  if (local >= total) {
    ref.pos = poly_eval(traj, total, 0);
  } else {
    const double s = std::max(local, 0.0);
    ref.pos = poly_eval(traj, s, 0);
    ref.vel = poly_eval(traj, s, 1);
    ref.acc = poly_eval(traj, s, 2);
    ref.jerk = poly_eval(traj, s, 3);
  }
  if (yaw_policy == YawPolicy::kVelocityAligned) {
    const double speed_xy = std::hypot(ref.vel.x(), ref.vel.y());
    if (speed_xy > 0.5) ref.yaw = std::atan2(ref.vel.y(), ref.vel.x());
  }
  return ref;
}

PolyTrajectory poly_from_chain(const PrimitiveTrajectory& chain) {
  PolyTrajectory out;
  out.segments.reserve(chain.primitives.size());
  for (const auto& prim : chain.primitives) {
    PolySegment seg;
    seg.duration = prim.tau;
    for (int axis = 0; axis < 3; ++axis) {
      seg.coeffs[static_cast<std::size_t>(axis)] = {prim.start_pos[axis], prim.start_vel[axis],
                                                    0.5 * prim.u[axis]};
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

void append_brake_segment(PolyTrajectory& traj, const Vec3& end_pos, const Vec3& end_vel,
                          double a_brake) {
  const double speed = end_vel.norm();
  if (speed < 1e-9) return;
  if (a_brake <= 0.0) throw std::invalid_argument("append_brake_segment: a_brake must be positive");
  const double tb = speed / a_brake;
  const Vec3 u = -end_vel / tb;
  PolySegment seg;
  seg.duration = tb;
  for (int axis = 0; axis < 3; ++axis) {
    seg.coeffs[static_cast<std::size_t>(axis)] = {end_pos[axis], end_vel[axis], 0.5 * u[axis]};
  }
  traj.segments.push_back(std::move(seg));
}

PolyTrajectory make_trapezoid_profile(const Vec3& p0, const Vec3& dir_in, double length,
                                      double cruise_speed, double accel) {
  if (length <= 0.0 || cruise_speed <= 0.0 || accel <= 0.0) {
    throw std::invalid_argument("make_trapezoid_profile: length, speed, accel must be positive");
  }
  const Vec3 dir = dir_in.normalized();
  PolyTrajectory out;
  auto quad = [&](const Vec3& pos, double v, double a, double duration) {
    PolySegment seg;
    seg.duration = duration;
    for (int axis = 0; axis < 3; ++axis) {
      seg.coeffs[static_cast<std::size_t>(axis)] = {pos[axis], v * dir[axis],
                                                    0.5 * a * dir[axis]};
    }
    return seg;
  };
  const double d_ramp = cruise_speed * cruise_speed / (2.0 * accel);
  if (2.0 * d_ramp >= length) {
    const double vp = std::sqrt(length * accel);
    const double t1 = vp / accel;
    out.segments.push_back(quad(p0, 0.0, accel, t1));
    out.segments.push_back(quad(p0 + 0.5 * length * dir, vp, -accel, t1));
  } else {
    const double t1 = cruise_speed / accel;
    const double t2 = (length - 2.0 * d_ramp) / cruise_speed;
    out.segments.push_back(quad(p0, 0.0, accel, t1));
    out.segments.push_back(quad(p0 + d_ramp * dir, cruise_speed, 0.0, t2));
    out.segments.push_back(quad(p0 + (length - d_ramp) * dir, cruise_speed, -accel, t1));
  }
  return out;
}

void scan_burst(VoxelMap& map, const GroundTruthEnv& env, const RobotState& state,
                const LidarParams& lidar) {
  const int n = std::max(1, static_cast<int>(std::lround(lidar.nod_period * lidar.scan_rate)));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / lidar.scan_rate;
    insert_scan(map, simulate_scan(env, state, t, lidar));
  }
}

const char* to_string(MissionOutcome o) {
  switch (o) {
    case MissionOutcome::kReachedGoal: return "reached_goal";
    case MissionOutcome::kTimeout: return "timeout";
    case MissionOutcome::kCollision: return "collision";
    case MissionOutcome::kAborted: return "aborted";
  }
  return "unknown";
}

namespace {

ReferenceTimeline stop_timeline(const FlatReference& from, double t0, double a_brake,
                                double fixed_yaw, YawPolicy policy) {
  ReferenceTimeline tl;
  tl.t0 = t0;
  tl.fixed_yaw = fixed_yaw;
  tl.yaw_policy = policy;
  if (from.vel.norm() < 1e-9) {
    tl.traj.segments.push_back(PolySegment::constant(from.pos, 1.0));
  } else {
    append_brake_segment(tl.traj, from.pos, from.vel, a_brake);
  }
  return tl;
}

bool timeline_collides(const ReferenceTimeline& tl, const VoxelMap& map, double radius,
                       UnknownSpace unknown) {
  const double total = tl.traj.total_duration();
  const double dt = 0.01;
  const int steps = std::max(1, static_cast<int>(std::ceil(total / dt - 1e-9)));
  for (int k = 0; k <= steps; ++k) {
    const double s = std::min(total, total * k / steps);
    const Vec3 pos = poly_eval(tl.traj, s, 0);
    if (!map.world_in_bounds(pos)) return true;
    if (map.is_occupied_inflated(pos, radius, unknown)) return true;
  }
  return false;
}

}  // namespace

MissionLog run_mission(const MissionConfig& cfg) {
  MissionLog log;

  const double control_dt = 1.0 / cfg.rates.control_hz;
  const int substeps = std::max(1, static_cast<int>(std::lround(control_dt / cfg.rates.substep)));
  const double sub_dt = control_dt / substeps;
  const int scan_every =
      std::max(1, static_cast<int>(std::lround(cfg.rates.control_hz / cfg.rates.scan_hz)));
  const double replan_period = 1.0 / cfg.rates.replan_hz;

  // Map grid spans the world bounds.
  const Vec3 extent = cfg.env.bounds.extent();
  Eigen::Vector3i dims;
  for (int axis = 0; axis < 3; ++axis) {
    dims[axis] =
        std::max(1, static_cast<int>(std::ceil(extent[axis] / cfg.map_resolution - 1e-9)));
  }
  VoxelMap map(cfg.env.bounds.min, cfg.map_resolution, dims);

  std::mt19937_64 rng(cfg.noise.seed);

  RobotState state;
  state.pos = cfg.start_pos;
  state.vel = cfg.start_vel;
  state.rot = rotation_from_z_and_yaw(Vec3::UnitZ(), cfg.start_yaw);
  state.time = 0.0;

  ReferenceTimeline reference;
  double line_total = 0.0;
  if (cfg.type == MissionType::kLine) {
    reference.traj = make_trapezoid_profile(cfg.start_pos, cfg.line.direction,
                                            cfg.line.length, cfg.line.cruise_speed,
                                            cfg.line.ramp_accel);
    reference.t0 = 0.0;
    reference.fixed_yaw = cfg.start_yaw;
    reference.yaw_policy = cfg.yaw_policy;
    line_total = reference.traj.total_duration();
  } else {
    FlatReference start_ref;
    start_ref.pos = cfg.start_pos;
    start_ref.vel = cfg.start_vel;
    start_ref.yaw = cfg.start_yaw;
    reference = stop_timeline(start_ref, 0.0, cfg.planner.a_max, cfg.start_yaw, cfg.yaw_policy);
  }

  double next_replan_t = 0.0;
  int plan_counter = 0;
  int active_plan_id = 0;
  bool estop_active = false;
  bool done = false;

  for (std::int64_t tick = 0; !done; ++tick) {
    const double t = static_cast<double>(tick) * control_dt;

    if (t > cfg.timeout) {
      log.outcome = MissionOutcome::kTimeout;
      log.failure_reason = "timeout";
      PlannerEvent ev;
      ev.plan_id = active_plan_id;
      ev.t = t;
      ev.type = "timeout";
      log.events.push_back(ev);
      log.end_time = t;
      break;
    }

    // Goal / line termination uses the true state.
    if (cfg.type == MissionType::kGoal) {
      if ((state.pos - cfg.goal_pos).norm() <= cfg.goal_tolerance && state.vel.norm() < 0.5) {
        log.outcome = MissionOutcome::kReachedGoal;
        PlannerEvent ev;
        ev.plan_id = active_plan_id;
        ev.t = t;
        ev.type = "goal";
        ev.status = "reached";
        log.events.push_back(ev);
        log.end_time = t;
        break;
      }
    } else if (t >= line_total + cfg.settle_time) {
      const Vec3 line_end = reference.at(reference.end_time()).pos;
      const bool settled =
          (state.pos - line_end).norm() <= cfg.goal_tolerance && state.vel.norm() < 0.5;
      log.outcome = settled ? MissionOutcome::kReachedGoal : MissionOutcome::kTimeout;
      if (!settled) log.failure_reason = "line profile did not settle";
      PlannerEvent ev;
      ev.plan_id = active_plan_id;
      ev.t = t;
      ev.type = settled ? "goal" : "timeout";
      log.events.push_back(ev);
      log.end_time = t;
      break;
    }

    if (cfg.scan_enabled && tick % scan_every == 0) {
      insert_scan(map, simulate_scan(cfg.env, state, t, cfg.lidar));
    }

    if (cfg.type == MissionType::kGoal && t >= next_replan_t - 1e-12) {
      next_replan_t += replan_period;
      if (next_replan_t <= t) next_replan_t = t + replan_period;

      FlatReference seed = reference.at(t);
      if (cfg.replan_source == ReplanSource::kEstimate) {
        const RobotState est = estimate(state, cfg.noise, rng);
        seed.pos = est.pos;
        seed.vel = est.vel;
      }

      ++plan_counter;
      ++log.plans_attempted;
      PlanResult pr = plan(seed.pos, seed.vel, cfg.goal_pos, cfg.goal_tolerance, map,
                           cfg.planner, cfg.robot_radius);

      PlannerEvent ev;
      ev.plan_id = plan_counter;
      ev.t = t;
      ev.type = "plan";
      ev.status = to_string(pr.status);
      ev.cost = pr.trajectory.total_cost;
      ev.expansions = pr.expansions;
      ev.primitives = static_cast<int>(pr.trajectory.primitives.size());
      std::vector<PlannerEvent> extra;

      if (pr.ok()) {
        estop_active = false;
        ReferenceTimeline incoming;
        incoming.t0 = t;
        incoming.fixed_yaw = cfg.start_yaw;
        incoming.yaw_policy = cfg.yaw_policy;
        if (!pr.trajectory.empty()) {
          const Vec3 chain_end_pos = pr.trajectory.primitives.back().end_pos();
          const Vec3 chain_end_vel = pr.trajectory.primitives.back().end_vel();
          bool used_refined = false;
          auto [wpts, wtimes] = extract_waypoints(pr.trajectory);
          EndpointState s0;
          s0.pos = seed.pos;
          s0.vel = seed.vel;
          s0.acc = seed.acc;
          s0.jerk = seed.jerk;
          EndpointState s1;
          s1.pos = chain_end_pos;
          s1.vel = chain_end_vel;
          std::string fallback_reason;
          try {
            incoming.traj = fit_polynomial(wpts, wtimes, s0, s1, cfg.refine);
            used_refined = true;
          } catch (const std::exception& e) {
            fallback_reason = std::string("fit: ") + e.what();
          }
          if (used_refined) {
            ev.max_dev = max_deviation(pr.trajectory, incoming.traj, 0.01);
            append_brake_segment(incoming.traj, chain_end_pos, chain_end_vel,
                                 cfg.planner.a_max);
            // Hold the refined path to the same clearance the search used;
            // anything less lets it shave corners the chain was pushed around.
            const double gate_radius =
                cfg.robot_radius + cfg.planner.effective_collision_margin();
            if (timeline_collides(incoming, map, gate_radius, cfg.planner.unknown)) {
              used_refined = false;
              fallback_reason = "refined trajectory intersects inflated map";
            }
          }
          if (!used_refined) {
            incoming.traj = poly_from_chain(pr.trajectory);
            append_brake_segment(incoming.traj, chain_end_pos, chain_end_vel,
                                 cfg.planner.a_max);
            ++log.fallback_count;
            PlannerEvent fb;
            fb.plan_id = plan_counter;
            fb.t = t;
            fb.type = "fallback";
            fb.status = fallback_reason;
            extra.push_back(fb);
          }
          ev.used_refined = used_refined ? 1 : 0;
        } else {
          // Start already satisfies the goal predicate: glide to a stop.
          incoming = stop_timeline(reference.at(t), t, cfg.planner.a_max, cfg.start_yaw,
                                   cfg.yaw_policy);
        }
        const FlatReference before = reference.at(t);
        const FlatReference after = incoming.at(t);
        ev.swap_pos_jump = (after.pos - before.pos).norm();
        ev.swap_vel_jump = (after.vel - before.vel).norm();
        reference = incoming;
        active_plan_id = plan_counter;
      } else if (!estop_active) {
        estop_active = true;
        ++log.estop_count;
        ReferenceTimeline stop =
            stop_timeline(reference.at(t), t, cfg.planner.a_max, cfg.start_yaw, cfg.yaw_policy);
        PlannerEvent es;
        es.plan_id = plan_counter;
        es.t = t;
        es.type = "estop";
        es.status = to_string(pr.status);
        es.swap_pos_jump = (stop.at(t).pos - reference.at(t).pos).norm();
        es.swap_vel_jump = (stop.at(t).vel - reference.at(t).vel).norm();
        extra.push_back(es);
        reference = stop;
      }
      log.events.push_back(ev);
      for (auto& e : extra) log.events.push_back(std::move(e));
    }

    const RobotState est = estimate(state, cfg.noise, rng);
    const FlatReference ref = reference.at(t);
    RobotState ctrl_state = est;
    ctrl_state.rot = state.rot;  // attitude is fed back exactly
    const Command cmd = control_step(ctrl_state, ref, cfg.control);

    ControlRecord rec;
    rec.t = t;
    rec.true_pos = state.pos;
    rec.true_vel = state.vel;
    rec.est_pos = est.pos;
    rec.est_vel = est.vel;
    rec.ref_pos = ref.pos;
    rec.ref_vel = ref.vel;
    rec.ref_acc = ref.acc;
    rec.thrust = cmd.thrust;
    rec.tilt_deg = state.rot.tilt() * 180.0 / M_PI;
    rec.tracking_error = (state.pos - ref.pos).norm();
    rec.plan_id = active_plan_id;
    log.records.push_back(rec);

    for (int i = 0; i < substeps && !done; ++i) {
      state = dynamics_step(state, cmd, sub_dt, cfg.vehicle);
      if (cfg.env.collides_sphere(state.pos, cfg.robot_radius)) {
        log.outcome = MissionOutcome::kCollision;
        log.failure_reason = "collision with ground truth";
        PlannerEvent ev;
        ev.plan_id = active_plan_id;
        ev.t = state.time;
        ev.type = "collision";
        log.events.push_back(ev);
        log.end_time = state.time;
        done = true;
      }
    }
  }

  log.map_occupied = map.occupied_count();
  return log;
}

namespace {

void put(std::ostream& os, double v, bool comma = true) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
  if (comma) os << ',';
}

}  // namespace

void write_log_csv(const MissionLog& log, std::ostream& os) {
  os << "t,px,py,pz,vx,vy,vz,est_px,est_py,est_pz,est_vx,est_vy,est_vz,"
        "ref_px,ref_py,ref_pz,ref_vx,ref_vy,ref_vz,ref_ax,ref_ay,ref_az,"
        "thrust,tilt_deg,tracking_error,plan_id\n";
  for (const auto& r : log.records) {
    put(os, r.t);
    for (int i = 0; i < 3; ++i) put(os, r.true_pos[i]);
    for (int i = 0; i < 3; ++i) put(os, r.true_vel[i]);
    for (int i = 0; i < 3; ++i) put(os, r.est_pos[i]);
    for (int i = 0; i < 3; ++i) put(os, r.est_vel[i]);
    for (int i = 0; i < 3; ++i) put(os, r.ref_pos[i]);
    for (int i = 0; i < 3; ++i) put(os, r.ref_vel[i]);
    for (int i = 0; i < 3; ++i) put(os, r.ref_acc[i]);
    put(os, r.thrust);
    put(os, r.tilt_deg);
    put(os, r.tracking_error);
    os << r.plan_id << '\n';
  }
}

void write_events_csv(const MissionLog& log, std::ostream& os) {
  os << "plan_id,t,type,status,cost,expansions,primitives,max_deviation,"
        "used_refined,swap_pos_jump,swap_vel_jump\n";
  for (const auto& e : log.events) {
    os << e.plan_id << ',';
    put(os, e.t);
    os << e.type << ',' << e.status << ',';
    put(os, e.cost);
    os << e.expansions << ',' << e.primitives << ',';
    put(os, e.max_dev);
    os << e.used_refined << ',';
    put(os, e.swap_pos_jump);
    put(os, e.swap_vel_jump, false);
    os << '\n';
  }
}

}  // namespace fastnav
