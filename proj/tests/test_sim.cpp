#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fastnav/analysis.hpp"
#include "fastnav/sim.hpp"
#include "fastnav/verify/bench.hpp"

using namespace fastnav;

namespace {

Primitive make_prim(const Vec3& p, const Vec3& v, const Vec3& u, double tau) {
  Primitive prim;
  prim.start_pos = p;
  prim.start_vel = v;
  prim.u = u;
  prim.tau = tau;
  return prim;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("hover is a fixed point of the plant") {
  VehicleParams vp;
  RobotState state;
  state.pos = Vec3(1, 2, 3);
  Command cmd;
  cmd.thrust = vp.mass * kGravity;
  const RobotState next = dynamics_step(state, cmd, 0.005, vp);
  CHECK((next.pos - state.pos).norm() < 1e-9);
  CHECK(next.vel.norm() < 1e-9);
  CHECK(next.rot.angle_to(state.rot) < 1e-9);
  CHECK(next.time == doctest::Approx(0.005));
}

TEST_CASE("level flight decelerates at the drag rate") {
  VehicleParams vp;
  RobotState state;
  state.vel = Vec3(10, 0, 0);
  Command cmd;
  cmd.thrust = vp.mass * kGravity;
  const double dt = 1e-6;
  const RobotState next = dynamics_step(state, cmd, dt, vp);
  CHECK((next.vel.x() - 10.0) / dt == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(std::abs(next.vel.z()) < 1e-12);
}

TEST_CASE("integrator error falls sixteen-fold when the step halves") {
  VehicleParams vp;
  vp.k_d = 6.0;  // decay rate k_d / m = 4 per second
  vp.attitude_mode = AttitudeMode::kIdeal;
  Command cmd;
  cmd.thrust = 0.0;

  auto final_vx = [&](int steps) {
    RobotState s;
    s.vel = Vec3(10, 0, 0);
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) s = dynamics_step(s, cmd, dt, vp);
    return s.vel.x();
  };
  const double exact = 10.0 * std::exp(-4.0);
  const double err_coarse = std::abs(final_vx(80) - exact);
  const double err_fine = std::abs(final_vx(160) - exact);
  REQUIRE(err_fine > 0.0);
  const double ratio = err_coarse / err_fine;
  CHECK(ratio > 14.5);
  CHECK(ratio < 17.5);
}

TEST_CASE("attitude update honors the configured response") {
  const Rotation target = rotation_from_z_and_yaw(
      Vec3(0, -std::sin(0.5), std::cos(0.5)), 0.0);
  RobotState state;
  Command cmd;
  cmd.thrust = 0.0;
  cmd.orientation = target;
  const double theta0 = state.rot.angle_to(target);
  REQUIRE(theta0 > 0.4);

  SUBCASE("ideal mode snaps") {
    VehicleParams vp;
    vp.attitude_mode = AttitudeMode::kIdeal;
    const RobotState next = dynamics_step(state, cmd, 0.05, vp);
    CHECK(next.rot.angle_to(target) < 1e-12);
  }
  SUBCASE("first-order mode closes the gap exponentially") {
    VehicleParams vp;
    vp.attitude_mode = AttitudeMode::kFirstOrder;
    vp.tau_att = 0.1;
    const RobotState next = dynamics_step(state, cmd, 0.05, vp);
    CHECK(next.rot.angle_to(target) ==
          doctest::Approx(theta0 * std::exp(-0.5)).epsilon(1e-9));
  }
}

TEST_CASE("thrust requests are clamped to the feasible range") {
  VehicleParams vp;
  RobotState state;
  state.vel = Vec3(1, 2, 0);
  Command big;
  big.thrust = 1e6;
  Command at_max;
  at_max.thrust = vp.f_max;
  const RobotState a = dynamics_step(state, big, 0.01, vp);
  const RobotState b = dynamics_step(state, at_max, 0.01, vp);
  CHECK((a.pos - b.pos).norm() == 0.0);
  CHECK((a.vel - b.vel).norm() == 0.0);

  Command negative;
  negative.thrust = -5.0;
  Command zero;
  zero.thrust = 0.0;
  const RobotState c = dynamics_step(state, negative, 0.01, vp);
  const RobotState d = dynamics_step(state, zero, 0.01, vp);
  CHECK((c.vel - d.vel).norm() == 0.0);

  CHECK_THROWS_AS(dynamics_step(state, zero, 0.0, vp), std::invalid_argument);
  CHECK_THROWS_AS(dynamics_step(state, zero, -0.01, vp), std::invalid_argument);
}

TEST_CASE("state estimation noise model") {
  RobotState truth;
  truth.pos = Vec3(3, -2, 7);
  truth.vel = Vec3(0.5, 0, -1);

  SUBCASE("zero sigmas pass the state through untouched") {
    NoiseParams np;
    std::mt19937_64 rng(5);
    const RobotState est = estimate(truth, np, rng);
    CHECK((est.pos - truth.pos).norm() == 0.0);
    CHECK((est.vel - truth.vel).norm() == 0.0);
    std::mt19937_64 fresh(5);
    CHECK(rng == fresh);  // no randomness consumed
  }
  SUBCASE("position noise has the configured spread") {
    NoiseParams np;
    np.sigma_pos = 0.1;
    std::mt19937_64 rng(123);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const RobotState est = estimate(truth, np, rng);
      const Vec3 e = est.pos - truth.pos;
      for (int axis = 0; axis < 3; ++axis) {
        sum += e[axis];
        sum_sq += e[axis] * e[axis];
      }
    }
    const double count = 3.0 * n;
    const double mean = sum / count;
    const double stddev = std::sqrt(sum_sq / count - mean * mean);
    CHECK(std::abs(mean) < 2e-3);
    CHECK(stddev > 0.097);
    CHECK(stddev < 0.103);
  }
  SUBCASE("identical seeds give identical streams") {
    NoiseParams np;
    np.sigma_pos = 0.1;
    np.sigma_vel = 0.05;
    std::mt19937_64 r1(7), r2(7);
    for (int i = 0; i < 50; ++i) {
      const RobotState a = estimate(truth, np, r1);
      const RobotState b = estimate(truth, np, r2);
      CHECK((a.pos - b.pos).norm() == 0.0);
      CHECK((a.vel - b.vel).norm() == 0.0);
    }
  }
}

TEST_CASE("chain rendering reproduces the chain state for state") {
  PrimitiveTrajectory chain;
  Vec3 p(1, 0, 2), v(0.5, -0.2, 0);
  for (const Vec3& u : {Vec3(1, 0.5, -0.2), Vec3(-0.5, 0, 0.4), Vec3(0, -1, 0)}) {
    chain.primitives.push_back(make_prim(p, v, u, 0.9));
    p = chain.primitives.back().end_pos();
    v = chain.primitives.back().end_vel();
    chain.total_duration += 0.9;
  }
  const PolyTrajectory poly = poly_from_chain(chain);
  CHECK(poly.total_duration() == doctest::Approx(chain.total_duration).epsilon(1e-12));
  for (double t = 0.0; t <= chain.total_duration + 1e-12; t += 0.05) {
    Vec3 cp, cv, ca;
    chain.state_at(t, cp, cv, ca);
    CHECK((poly_eval(poly, t, 0) - cp).norm() < 1e-12);
    CHECK((poly_eval(poly, t, 1) - cv).norm() < 1e-12);
  }
}

TEST_CASE("brake segment ramps to rest at the requested decel") {
  PrimitiveTrajectory chain;
  chain.primitives.push_back(make_prim(Vec3(0, 0, 2), Vec3(3, -1, 0), Vec3::Zero(), 1.0));
  chain.total_duration = 1.0;
  PolyTrajectory traj = poly_from_chain(chain);
  const Vec3 end_pos = chain.primitives.back().end_pos();
  const Vec3 end_vel(3, -1, 0);
  const double pre = traj.total_duration();

  append_brake_segment(traj, end_pos, end_vel, 2.5);
  const double T = end_vel.norm() / 2.5;
  CHECK(traj.total_duration() == doctest::Approx(pre + T).epsilon(1e-12));
  CHECK(poly_eval(traj, pre + T, 1).norm() < 1e-12);
  const Vec3 stop = end_pos + 0.5 * T * end_vel;
  CHECK((poly_eval(traj, pre + T, 0) - stop).norm() < 1e-12);
  // continuous hand-off into the brake
  CHECK((traj.segments[traj.segments.size() - 2].eval(1.0, 0) -
         traj.segments.back().eval(0.0, 0)).norm() < 1e-12);
  CHECK((traj.segments[traj.segments.size() - 2].eval(1.0, 1) -
         traj.segments.back().eval(0.0, 1)).norm() < 1e-12);

  SUBCASE("negligible speed is a no-op") {
    PolyTrajectory still = poly_from_chain(chain);
    const std::size_t before = still.segments.size();
    append_brake_segment(still, end_pos, Vec3(1e-13, 0, 0), 2.5);
    CHECK(still.segments.size() == before);
  }
  SUBCASE("non-positive decel is rejected") {
    CHECK_THROWS_AS(append_brake_segment(traj, end_pos, end_vel, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("trapezoid profile hits cruise speed and parks at the far end") {
  const Vec3 p0(1, 2, 3);
  const PolyTrajectory traj = make_trapezoid_profile(p0, Vec3::UnitX(), 100.0, 10.0, 2.5);
  CHECK(traj.total_duration() == doctest::Approx(14.0).epsilon(1e-9));
  CHECK((poly_eval(traj, 7.0, 1) - Vec3(10, 0, 0)).norm() < 1e-9);
  CHECK((poly_eval(traj, 14.0, 0) - (p0 + Vec3(100, 0, 0))).norm() < 1e-9);
  CHECK(poly_eval(traj, 14.0, 1).norm() < 1e-9);

  SUBCASE("short runs fall back to a triangular profile") {
    const PolyTrajectory tri = make_trapezoid_profile(p0, Vec3::UnitX(), 10.0, 10.0, 2.5);
    CHECK(tri.total_duration() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK((poly_eval(tri, 2.0, 1) - Vec3(5, 0, 0)).norm() < 1e-9);
    CHECK((poly_eval(tri, 4.0, 0) - (p0 + Vec3(10, 0, 0))).norm() < 1e-9);
  }
  SUBCASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(make_trapezoid_profile(p0, Vec3::UnitX(), -1.0, 10.0, 2.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_trapezoid_profile(p0, Vec3::UnitX(), 10.0, 0.0, 2.5),
                    std::invalid_argument);
  }
}

TEST_CASE("reference timeline clamps its ends and steers the yaw") {
  PrimitiveTrajectory chain;
  chain.primitives.push_back(make_prim(Vec3(2, 0, 1), Vec3(1, 0, 0), Vec3(0.5, 0, 0), 2.0));
  chain.total_duration = 2.0;
  ReferenceTimeline tl;
  tl.traj = poly_from_chain(chain);
  tl.t0 = 10.0;
  tl.fixed_yaw = 0.7;

  SUBCASE("before the anchor the full initial state holds") {
    const FlatReference r = tl.at(4.0);
    CHECK((r.pos - Vec3(2, 0, 1)).norm() < 1e-12);
    CHECK((r.vel - Vec3(1, 0, 0)).norm() < 1e-12);
  }
  SUBCASE("inside the active window the polynomial is tracked") {
    const FlatReference r = tl.at(11.0);
    CHECK((r.pos - Vec3(3.25, 0, 1)).norm() < 1e-12);
    CHECK((r.vel - Vec3(1.5, 0, 0)).norm() < 1e-12);
    CHECK((r.acc - Vec3(0.5, 0, 0)).norm() < 1e-12);
    CHECK(r.yaw == doctest::Approx(0.7));
  }
  SUBCASE("after the end the reference parks") {
    const FlatReference r = tl.at(50.0);
    CHECK((r.pos - Vec3(5, 0, 1)).norm() < 1e-12);
    CHECK(r.vel.norm() == 0.0);
  }
  SUBCASE("velocity-aligned yaw follows the motion when moving") {
    ReferenceTimeline moving;
    PrimitiveTrajectory fast;
    fast.primitives.push_back(make_prim(Vec3::Zero(), Vec3(0, 2, 0), Vec3::Zero(), 3.0));
    fast.total_duration = 3.0;
    moving.traj = poly_from_chain(fast);
    moving.yaw_policy = YawPolicy::kVelocityAligned;
    moving.fixed_yaw = 0.7;
    CHECK(moving.at(1.0).yaw == doctest::Approx(M_PI / 2).epsilon(1e-12));

    PrimitiveTrajectory slow;
    slow.primitives.push_back(make_prim(Vec3::Zero(), Vec3(0.3, 0, 0), Vec3::Zero(), 3.0));
    slow.total_duration = 3.0;
    moving.traj = poly_from_chain(slow);
    CHECK(moving.at(1.0).yaw == doctest::Approx(0.7));
  }
}

TEST_CASE("outcome labels") {
  CHECK(std::strcmp(to_string(MissionOutcome::kReachedGoal), "reached_goal") == 0);
  CHECK(std::strcmp(to_string(MissionOutcome::kTimeout), "timeout") == 0);
  CHECK(std::strcmp(to_string(MissionOutcome::kCollision), "collision") == 0);
  CHECK(std::strcmp(to_string(MissionOutcome::kAborted), "aborted") == 0);
}

TEST_CASE("log metrics agree with hand-computed values") {
  MissionLog log;
  auto add = [&](double t, Vec3 tp, Vec3 tv, Vec3 rp, double terr) {
    ControlRecord r{};
    r.t = t;
    r.true_pos = tp;
    r.true_vel = tv;
    r.est_pos = tp;
    r.est_vel = tv;
    r.ref_pos = rp;
    r.ref_vel = Vec3::Zero();
    r.ref_acc = Vec3::Zero();
    r.thrust = 0.0;
    r.tilt_deg = 0.0;
    r.tracking_error = terr;
    r.plan_id = 0;
    log.records.push_back(r);
  };
  add(0.0, Vec3(0, 0, 5.0), Vec3(3, 0, 0), Vec3(0.5, 0, 5.0), 0.1);
  add(1.0, Vec3(2, 0, 5.0), Vec3(1, 0, 0), Vec3(2.5, 0, 5.3), 0.4);
  add(2.0, Vec3(2, 2, 4.0), Vec3(2, 0, 0), Vec3(2.5, 2, 4.0), 0.2);

  CHECK(total_path_length(log) == doctest::Approx(2.0 + std::sqrt(5.0)).epsilon(1e-12));
  CHECK(final_distance_to(log, Vec3(2, 2, 5)) == doctest::Approx(1.0));
  CHECK(mean_true_speed(log, 0.0, 2.0) == doctest::Approx(2.0));
  CHECK(mean_along_track_lag(log, Vec3::UnitX(), 0.0, 2.0) == doctest::Approx(0.5));
  CHECK(max_abs_altitude_error(log, 0.0, 2.0) == doctest::Approx(0.3));
  CHECK(max_tracking_error(log) == doctest::Approx(0.4));
  CHECK(first_time_speed_above(log, 2.5) == doctest::Approx(0.0));
  CHECK(first_time_speed_above(log, 5.0) == doctest::Approx(-1.0));
  CHECK(altitude_monotone_nonincreasing(log, 0.0, 2.0, 1e-6));

  const auto crossings = plane_crossings(log, 0, 1.0);
  REQUIRE(crossings.size() == 1);
  CHECK((crossings[0] - Vec3(1, 0, 5)).norm() < 1e-12);
  CHECK(path_enters_box(log, Box{Vec3(1.5, -0.5, 4.5), Vec3(2.5, 0.5, 5.5)}));
  CHECK(!path_enters_box(log, Box{Vec3(10, 10, 10), Vec3(11, 11, 11)}));

  MissionLog riser = log;
  riser.records[1].true_pos.z() = 5.2;
  CHECK(!altitude_monotone_nonincreasing(riser, 0.0, 2.0, 0.1));

  PlannerEvent e1;
  e1.type = "plan";
  e1.swap_pos_jump = 0.01;
  e1.swap_vel_jump = 0.002;
  PlannerEvent e2;
  e2.type = "estop";
  PlannerEvent e3;
  e3.type = "plan";
  e3.swap_pos_jump = 0.03;
  e3.swap_vel_jump = 0.001;
  log.events = {e1, e2, e3};
  CHECK(count_events(log, "plan") == 2);
  CHECK(count_events(log, "estop") == 1);
  CHECK(max_swap_pos_jump(log) == doctest::Approx(0.03));
  CHECK(max_swap_vel_jump(log) == doctest::Approx(0.002));
}

}  // TEST_SUITE("sim")

TEST_SUITE("sim_missions") {

TEST_CASE("open-room mission reaches the goal with steady progress") {
  MissionConfig cfg;
  cfg.env.bounds = Box{Vec3(0, -8, 0), Vec3(28, 8, 5)};
  cfg.start_pos = Vec3(3, 0, 2);
  cfg.goal_pos = Vec3(23, 0, 2);
  cfg.goal_tolerance = 1.0;
  cfg.timeout = 30.0;
  cfg.planner.tau = 0.8;
  cfg.planner.v_max = 6.0;
  cfg.planner.a_max = 4.0;
  cfg.planner.rho = 160.0;
  cfg.planner.goal_vel_tolerance = 1.0;
  cfg.planner.pos_quantum = 0.25;
  cfg.planner.vel_quantum = 0.25;

  const MissionLog log = run_mission(cfg);
  CHECK(log.outcome == MissionOutcome::kReachedGoal);
  CHECK(log.estop_count == 0);
  CHECK(count_events(log, "collision") == 0);
  CHECK(log.map_occupied > 0);
  REQUIRE(!log.records.empty());

  for (std::size_t i = 0; i + 1 < log.records.size(); ++i)
    CHECK(log.records[i + 1].t > log.records[i].t);

  double first_plan_t = -1.0;
  for (const auto& e : log.events) {
    if (e.type == "plan") {
      first_plan_t = e.t;
      break;
    }
  }
  REQUIRE(first_plan_t >= 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : log.records) {
    if (r.t < first_plan_t + 0.5) continue;
    const double d = (r.true_pos - cfg.goal_pos).norm();
    CHECK(d <= best + 0.1);
    best = std::min(best, d);
  }
}

TEST_CASE("true state never passes through an obstacle") {
  const Scenario sc = verify::bench_scenario("wall_replan");
  const MissionLog log = run_mission(sc.mission);
  CHECK(log.outcome == MissionOutcome::kReachedGoal);
  CHECK(max_swap_pos_jump(log) < 1e-6);
  CHECK(max_swap_vel_jump(log) < 1e-6);

  const GroundTruthEnv& env = sc.mission.env;
  for (std::size_t i = 0; i + 1 < log.records.size(); ++i) {
    const Vec3 a = log.records[i].true_pos;
    const Vec3 b = log.records[i + 1].true_pos;
    CHECK(!env.occupied(a));
    const double dist = (b - a).norm();
    if (dist < 1e-9) continue;
    const auto hit = raycast(env, a, (b - a) / dist, dist);
    CHECK(!hit.has_value());
  }
}

TEST_CASE("a sealed goal triggers braking and the mission keeps trying") {
  MissionConfig cfg;
  cfg.env.bounds = Box{Vec3(0, 0, 0), Vec3(14, 8, 4)};
  cfg.env.boxes.push_back(Box{Vec3(7, 0, 0), Vec3(7.5, 8, 4)});
  cfg.start_pos = Vec3(2, 4, 2);
  cfg.goal_pos = Vec3(12, 4, 2);
  cfg.goal_tolerance = 1.0;
  cfg.timeout = 6.0;
  cfg.planner.tau = 0.8;
  cfg.planner.v_max = 3.0;
  cfg.planner.a_max = 4.0;
  cfg.planner.rho = 160.0;
  cfg.planner.goal_vel_tolerance = 1.0;
  cfg.planner.pos_quantum = 0.25;
  cfg.planner.vel_quantum = 0.25;
  cfg.planner.max_expansions = 4000;

  const MissionLog log = run_mission(cfg);
  CHECK(log.outcome == MissionOutcome::kTimeout);
  CHECK(log.estop_count >= 1);
  CHECK(count_events(log, "estop") >= 1);
  CHECK(count_events(log, "collision") == 0);
  CHECK(log.plans_attempted >= 10);
  REQUIRE(!log.records.empty());
  CHECK(log.records.back().true_vel.norm() < 0.1);
}

TEST_CASE("identical configurations produce byte-identical logs") {
  MissionConfig cfg;
  cfg.env.bounds = Box{Vec3(-5, -5, 0), Vec3(60, 5, 10)};
  cfg.start_pos = Vec3(0, 0, 5);
  cfg.type = MissionType::kLine;
  cfg.line.direction = Vec3::UnitX();
  cfg.line.length = 40.0;
  cfg.line.cruise_speed = 8.0;
  cfg.line.ramp_accel = 2.5;
  cfg.goal_pos = Vec3(40, 0, 5);
  cfg.scan_enabled = false;
  cfg.noise.sigma_pos = 0.05;
  cfg.noise.seed = 4;
  cfg.timeout = 30.0;

  const MissionLog a = run_mission(cfg);
  const MissionLog b = run_mission(cfg);
  CHECK(a.outcome == MissionOutcome::kReachedGoal);
  CHECK(a.outcome == b.outcome);
  REQUIRE(a.records.size() == b.records.size());

  std::ostringstream la, lb, ea, eb;
  write_log_csv(a, la);
  write_log_csv(b, lb);
  write_events_csv(a, ea);
  write_events_csv(b, eb);
  CHECK(la.str() == lb.str());
  CHECK(ea.str() == eb.str());
  CHECK(la.str().size() > 1000);
}

}  // TEST_SUITE("sim_missions")
