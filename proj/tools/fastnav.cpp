#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastnav/analysis.hpp"
#include "fastnav/refine.hpp"
#include "fastnav/scenario.hpp"
#include "fastnav/sim.hpp"
#include "fastnav/verify/sidecar.hpp"
#include "fastnav/verify/suite.hpp"

namespace {

using namespace fastnav;
namespace fs = std::filesystem;

// Exit codes are a stable contract:
//   0 success, 2 invalid input, 3 planning failed, 4 mission failed,
//   5 verification failed.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNoPlan = 3;
constexpr int kExitMissionFailed = 4;
constexpr int kExitVerifyFailed = 5;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string drag_comp;   // "", "on", "off"
  std::string unknown_as;  // "", "free", "occupied"
};

void apply_overrides(Scenario& sc, const Overrides& ov) {
  if (ov.seed) {
    sc.seed = *ov.seed;
    sc.mission.noise.seed = *ov.seed;
  }
  if (ov.drag_comp == "on") sc.mission.control.drag_comp = true;
  if (ov.drag_comp == "off") sc.mission.control.drag_comp = false;
  if (ov.unknown_as == "free") sc.mission.planner.unknown = UnknownSpace::kFree;
  if (ov.unknown_as == "occupied") sc.mission.planner.unknown = UnknownSpace::kOccupied;
}

std::optional<Scenario> load_or_report(const std::string& path, const Overrides& ov) {
  try {
    Scenario sc = load_scenario(path);
    apply_overrides(sc, ov);
    return sc;
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return std::nullopt;
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void write_trajectory_csv(std::ostream& os, const PolyTrajectory& poly, double dt) {
  os << "t,px,py,pz,vx,vy,vz,ax,ay,az\n";
  char buf[512];
  const double T = poly.total_duration();
  const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  for (int k = 0; k <= steps; ++k) {
    const double t = std::min(T, T * k / steps);
    const Vec3 p = poly_eval(poly, t, 0);
    const Vec3 v = poly_eval(poly, t, 1);
    const Vec3 a = poly_eval(poly, t, 2);
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t, p.x(),
                  p.y(), p.z(), v.x(), v.y(), v.z(), a.x(), a.y(), a.z());
    os << buf;
  }
}

int cmd_plan(const std::string& scenario_path, const std::string& out_dir,
             const std::string& map_path, const Overrides& ov) {
  auto sc = load_or_report(scenario_path, ov);
  if (!sc) return kExitInvalid;
  const MissionConfig& m = sc->mission;

  VoxelMap map;
  if (!map_path.empty()) {
    std::ifstream in(map_path);
    if (!in) {
      std::cerr << "cannot open map: " << map_path << "\n";
      return kExitInvalid;
    }
    try {
      map = VoxelMap::load(in);
    } catch (const std::exception& e) {
      std::cerr << "bad map file: " << e.what() << "\n";
      return kExitInvalid;
    }
  } else {
    const Vec3 extent = m.env.bounds.extent();
    Eigen::Vector3i dims;
    for (int axis = 0; axis < 3; ++axis)
      dims[axis] =
          std::max(1, static_cast<int>(std::ceil(extent[axis] / m.map_resolution - 1e-9)));
    map = VoxelMap(m.env.bounds.min, m.map_resolution, dims);
    RobotState at_start;
    at_start.pos = m.start_pos;
    at_start.vel = m.start_vel;
    at_start.rot = rotation_from_z_and_yaw(Vec3::UnitZ(), m.start_yaw);
    scan_burst(map, m.env, at_start, m.lidar);
  }

  PlanResult pr =
      plan(m.start_pos, m.start_vel, m.goal_pos, m.goal_tolerance, map, m.planner, m.robot_radius);
  std::cout << "plan: " << to_string(pr.status) << "\n";
  std::cout << "  expansions: " << pr.expansions << "\n";
  std::cout << "  map occupied voxels: " << map.occupied_count() << "\n";
  if (!pr.ok()) return kExitNoPlan;

  std::cout << "  cost: " << pr.trajectory.total_cost << "\n";
  std::cout << "  duration: " << pr.trajectory.total_duration << " s\n";
  std::cout << "  primitives: " << pr.trajectory.primitives.size() << "\n";

  fs::create_directories(out_dir);
  PolyTrajectory refined;
  double deviation = 0.0;
  if (pr.trajectory.primitives.empty()) {
    std::cout << "  start already satisfies the goal; no trajectory written\n";
    return kExitOk;
  }
  auto [wps, times] = extract_waypoints(pr.trajectory);
  EndpointState a, b;
  a.pos = wps.front();
  a.vel = m.start_vel;
  b.pos = wps.back();
  b.vel = pr.trajectory.primitives.back().end_vel();
  try {
    refined = fit_polynomial(wps, times, a, b, m.refine);
    deviation = max_deviation(pr.trajectory, refined, 0.01);
    std::cout << "  max deviation (refined vs primitives): " << deviation << " m\n";
  } catch (const std::exception& e) {
    std::cout << "  refinement failed (" << e.what() << "); writing primitive chain\n";
    refined = poly_from_chain(pr.trajectory);
  }

  const fs::path traj_path = fs::path(out_dir) / (sc->name + "_trajectory.csv");
  auto os = open_out(traj_path);
  write_trajectory_csv(os, refined, 0.01);
  std::cout << "  wrote " << traj_path.string() << "\n";
  return kExitOk;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir, const Overrides& ov) {
  auto sc = load_or_report(scenario_path, ov);
  if (!sc) return kExitInvalid;

  MissionLog log = run_mission(sc->mission);

  fs::create_directories(out_dir);
  const fs::path rec_path = fs::path(out_dir) / (sc->name + "_records.csv");
  const fs::path ev_path = fs::path(out_dir) / (sc->name + "_events.csv");
  {
    auto os = open_out(rec_path);
    write_log_csv(log, os);
  }
  {
    auto os = open_out(ev_path);
    write_events_csv(log, os);
  }

  double max_speed = 0.0;
  for (const auto& rec : log.records) max_speed = std::max(max_speed, rec.true_vel.norm());

  std::cout << "mission: " << to_string(log.outcome) << "\n";
  if (!log.failure_reason.empty()) std::cout << "  reason: " << log.failure_reason << "\n";
  std::cout << "  sim end: " << log.end_time << " s\n";
  std::cout << "  max speed: " << max_speed << " m/s\n";
  std::cout << "  max tracking error: " << max_tracking_error(log) << " m\n";
  std::cout << "  path length: " << total_path_length(log) << " m\n";
  std::cout << "  final distance to goal: " << final_distance_to(log, sc->mission.goal_pos)
            << " m\n";
  std::cout << "  plans: " << log.plans_attempted << ", fallbacks: " << log.fallback_count
            << ", estops: " << log.estop_count << "\n";
  std::cout << "  map occupied voxels: " << log.map_occupied << "\n";
  std::cout << "  wrote " << rec_path.string() << ", " << ev_path.string() << "\n";
  return log.outcome == MissionOutcome::kReachedGoal ? kExitOk : kExitMissionFailed;
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_dir,
              const std::vector<double>& speeds, const std::string& drag_comp_mode,
              const Overrides& ov) {
  auto sc = load_or_report(scenario_path, ov);
  if (!sc) return kExitInvalid;
  if (sc->mission.type != MissionType::kLine) {
    std::cerr << "sweep requires a line-mission scenario\n";
    return kExitInvalid;
  }

  std::vector<bool> comp_values;
  if (drag_comp_mode == "on")
    comp_values = {true};
  else if (drag_comp_mode == "off")
    comp_values = {false};
  else
    comp_values = {false, true};

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / (sc->name + "_sweep.csv");
  auto os = open_out(csv_path);
  os << "speed,drag_comp,mean_lag,predicted_lag,outcome\n";

  std::cout << "speed  comp  mean lag   predicted\n";
  bool any_failed = false;
  for (double v : speeds) {
    for (bool comp : comp_values) {
      Scenario run_sc = *sc;
      MissionConfig& m = run_sc.mission;
      m.line.cruise_speed = v;
      m.control.drag_comp = comp;

      const double a = m.line.ramp_accel;
      const double t_ramp = v / a;
      const double cruise_len = m.line.length - v * v / a;
      if (cruise_len <= 0.0) {
        std::cerr << "speed " << v << ": line too short to reach cruise\n";
        return kExitInvalid;
      }
      const double t_cruise = cruise_len / v;
      const double w0 = t_ramp + 0.25 * t_cruise;
      const double w1 = t_ramp + 0.95 * t_cruise;
      m.timeout = 2.0 * t_ramp + t_cruise + m.settle_time + 5.0;

      MissionLog log = run_mission(m);
      const double lag = mean_along_track_lag(log, m.line.direction, w0, w1);
      const double predicted =
          comp ? 0.0 : (m.control.k_d / m.control.mass) * v / m.control.k_x;
      if (log.outcome != MissionOutcome::kReachedGoal) any_failed = true;

      char buf[256];
      std::snprintf(buf, sizeof(buf), "%5.2f  %-4s  %8.4f m  %8.4f m  %s", v,
                    comp ? "on" : "off", lag, predicted, to_string(log.outcome));
      std::cout << buf << "\n";
      std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%s\n", v, comp ? 1 : 0, lag,
                    predicted, to_string(log.outcome));
      os << buf;
    }
  }
  std::cout << "wrote " << csv_path.string() << "\n";
  return any_failed ? kExitMissionFailed : kExitOk;
}

int cmd_verify(const std::string& scenario_dir) {
  const auto criteria = verify::run_all_checks(std::cout);
  std::vector<verify::SidecarOutcome> sidecars;
  if (!scenario_dir.empty()) sidecars = verify::run_sidecar_checks(scenario_dir, std::cout);
  const bool ok = verify::all_passed(criteria) && verify::all_passed(sidecars);
  std::cout << (ok ? "verification passed" : "verification FAILED") << "\n";
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinodynamic quadrotor navigation sandbox"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", map_path;
  std::string scenario_dir = "scenarios";
  Overrides ov;
  std::uint64_t seed_value = 0;
  std::vector<double> speeds = {5.0, 10.0, 15.0, 17.5};
  std::string sweep_comp = "both";

  const auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    if (needs_scenario)
      cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--out", out_dir, "output directory (default: out)");
    cmd->add_option("--seed", seed_value, "override the noise RNG seed")
        ->each([&](const std::string&) { ov.seed = seed_value; });
    cmd->add_option("--drag-comp", ov.drag_comp, "override drag compensation")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--unknown-as", ov.unknown_as, "treat out-of-grid space as")
        ->check(CLI::IsMember({"free", "occupied"}));
  };

  CLI::App* plan_cmd = app.add_subcommand("plan", "single-shot plan + refinement");
  add_common(plan_cmd, true);
  plan_cmd->add_option("--map", map_path, "pre-built voxel map dump (skips the scan burst)");

  CLI::App* run_cmd = app.add_subcommand("run", "closed-loop mission");
  add_common(run_cmd, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "line-mission speed sweep");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--speeds", speeds, "cruise speeds to sweep, m/s");
  sweep_cmd->add_option("--drag-comp-mode", sweep_comp, "off, on, or both")
      ->check(CLI::IsMember({"off", "on", "both"}));

  CLI::App* verify_cmd = app.add_subcommand("verify", "acceptance + scenario regression gate");
  verify_cmd->add_option("--scenarios", scenario_dir,
                         "scenario tree with .expected.json sidecars (default: scenarios)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (plan_cmd->parsed()) return cmd_plan(scenario_path, out_dir, map_path, ov);
    if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir, ov);
    if (sweep_cmd->parsed()) return cmd_sweep(scenario_path, out_dir, speeds, sweep_comp, ov);
    if (verify_cmd->parsed()) return cmd_verify(scenario_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
