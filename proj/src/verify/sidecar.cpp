#include "fastnav/verify/sidecar.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fastnav/analysis.hpp"
#include "fastnav/scenario.hpp"
#include "fastnav/sim.hpp"

namespace fastnav::verify {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

double altitude_at(const MissionLog& log, double t) {
  for (const auto& rec : log.records)
    if (rec.t >= t - 1e-9) return rec.true_pos.z();
  return log.records.empty() ? 0.0 : log.records.back().true_pos.z();
}

// Evaluates one sidecar document against a finished mission. Appends a short
// note per failed expectation.
bool evaluate(const json& exp, const Scenario& sc, const MissionLog& log,
              std::vector<std::string>& notes) {
  bool ok = true;
  const auto fail = [&](const std::string& s) {
    ok = false;
    notes.push_back(s);
  };

  if (exp.contains("outcome")) {
    const std::string want = exp.at("outcome").get<std::string>();
    if (want != to_string(log.outcome))
      fail("outcome " + std::string(to_string(log.outcome)) + " (want " + want + ")");
  }
  if (exp.contains("max_estops") && log.estop_count > exp.at("max_estops").get<int>())
    fail("estops " + std::to_string(log.estop_count));
  if (exp.contains("no_collision_events") && exp.at("no_collision_events").get<bool>() &&
      count_events(log, "collision") != 0)
    fail("collision events present");
  if (exp.contains("max_swap_pos_jump") &&
      max_swap_pos_jump(log) > exp.at("max_swap_pos_jump").get<double>())
    fail("swap pos jump " + fmt(max_swap_pos_jump(log), 3));
  if (exp.contains("max_swap_vel_jump") &&
      max_swap_vel_jump(log) > exp.at("max_swap_vel_jump").get<double>())
    fail("swap vel jump " + fmt(max_swap_vel_jump(log), 3));

  if (exp.contains("mean_lag")) {
    const json& e = exp.at("mean_lag");
    const double a = e.at("window")[0].get<double>();
    const double b = e.at("window")[1].get<double>();
    const double lag = mean_along_track_lag(log, sc.mission.line.direction, a, b);
    if (lag < e.at("min").get<double>() || lag > e.at("max").get<double>())
      fail("mean lag " + fmt(lag));
  }
  if (exp.contains("mean_speed")) {
    const json& e = exp.at("mean_speed");
    const double a = e.at("window")[0].get<double>();
    const double b = e.at("window")[1].get<double>();
    const double v = mean_true_speed(log, a, b);
    if (v < e.at("min").get<double>() || v > e.at("max").get<double>())
      fail("mean speed " + fmt(v));
  }
  if (exp.contains("max_alt_err")) {
    const json& e = exp.at("max_alt_err");
    const double a = e.at("window")[0].get<double>();
    const double b = e.at("window")[1].get<double>();
    const double err = max_abs_altitude_error(log, a, std::min(b, log.end_time));
    if (err > e.at("max").get<double>()) fail("alt err " + fmt(err));
  }
  if (exp.contains("monotone_sink")) {
    const json& e = exp.at("monotone_sink");
    const double t_on = first_time_speed_above(log, e.at("from_speed").get<double>());
    if (t_on < 0.0 || log.records.empty()) {
      fail("never reached sink onset speed");
    } else {
      const double t_end =
          std::min(t_on + e.at("duration").get<double>(), log.records.back().t);
      const double drop = altitude_at(log, t_on) - altitude_at(log, t_end);
      if (!altitude_monotone_nonincreasing(log, t_on, t_end, e.at("tol").get<double>()))
        fail("altitude not monotone");
      if (drop < e.at("min_drop").get<double>()) fail("drop only " + fmt(drop));
    }
  }
  if (exp.contains("door")) {
    const json& e = exp.at("door");
    const double px = e.at("plane_x").get<double>();
    const double y0 = e.at("y")[0].get<double>(), y1 = e.at("y")[1].get<double>();
    const double z0 = e.at("z")[0].get<double>(), z1 = e.at("z")[1].get<double>();
    const double fy0 = e.at("footprint_y")[0].get<double>();
    const double fy1 = e.at("footprint_y")[1].get<double>();
    int through = 0;
    bool breach = false;
    for (const Vec3& c : plane_crossings(log, 0, px)) {
      if (c.y() < fy0 || c.y() > fy1) continue;
      if (c.y() > y0 && c.y() < y1 && c.z() > z0 && c.z() < z1)
        ++through;
      else
        breach = true;
    }
    if (through < 1) fail("no door crossing");
    if (breach) fail("wall breach");
  }
  if (exp.contains("min_path_ratio")) {
    const double straight = (sc.mission.goal_pos - sc.mission.start_pos).norm();
    const double ratio = total_path_length(log) / std::max(straight, 1e-9);
    if (ratio < exp.at("min_path_ratio").get<double>()) fail("path ratio " + fmt(ratio));
  }
  return ok;
}

}  // namespace

std::vector<SidecarOutcome> run_sidecar_checks(const std::string& dir, std::ostream& os) {
  std::vector<SidecarOutcome> out;
  std::vector<fs::path> paths;
  if (fs::exists(dir))
    for (const auto& entry : fs::directory_iterator(dir)) {
      const fs::path p = entry.path();
      if (p.extension() != ".json") continue;
      if (p.string().size() > 14 &&
          p.string().rfind(".expected.json") == p.string().size() - 14)
        continue;
      fs::path sidecar = p;
      sidecar.replace_extension();  // drop .json
      sidecar += ".expected.json";
      if (fs::exists(sidecar)) paths.push_back(p);
    }
  std::sort(paths.begin(), paths.end());

  for (const fs::path& p : paths) {
    SidecarOutcome so;
    so.scenario = p.stem().string();
    try {
      Scenario sc = load_scenario(p.string());
      fs::path sidecar = p;
      sidecar.replace_extension();
      sidecar += ".expected.json";
      std::ifstream in(sidecar);
      const json exp = json::parse(in);

      MissionLog log = run_mission(sc.mission);
      std::vector<std::string> notes;
      bool ok = evaluate(exp, sc, log, notes);

      if (exp.contains("determinism") && exp.at("determinism").get<bool>()) {
        MissionLog again = run_mission(sc.mission);
        std::ostringstream a1, a2, b1, b2;
        write_log_csv(log, a1);
        write_log_csv(again, a2);
        write_events_csv(log, b1);
        write_events_csv(again, b2);
        if (a1.str() != a2.str() || b1.str() != b2.str()) {
          ok = false;
          notes.push_back("repeat run differs");
        }
      }
      so.pass = ok;
      if (ok) {
        so.detail = std::string(to_string(log.outcome)) + ", end " + fmt(log.end_time, 3) + " s";
      } else {
        std::string all;
        for (const auto& n : notes) all += (all.empty() ? "" : "; ") + n;
        so.detail = all;
      }
    } catch (const std::exception& e) {
      so.pass = false;
      so.detail = e.what();
    }
    os << "scenario " << so.scenario << " [" << (so.pass ? "PASS" : "FAIL") << "] "
       << so.detail << "\n";
    out.push_back(so);
  }
  return out;
}

bool all_passed(const std::vector<SidecarOutcome>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace fastnav::verify
