#include "fastnav/verify/bench.hpp"

#include <stdexcept>

namespace fastnav::verify {

namespace {

constexpr const char* kForest = R"json({
  "name": "forest",
  "seed": 42,
  "world": {
    "bounds": {"min": [0, 0, 0], "max": [44, 20, 5]},
    "random_cylinders": {
      "count": 18,
      "radius": [0.25, 0.45],
      "z": [0, 5],
      "region": {"min": [8, 2, 0], "max": [36, 18, 5]},
      "clearance": 2.0
    }
  },
  "start": {"position": [3, 10, 1.8]},
  "goal": {"position": [41, 10, 1.8], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {"type": "goal", "timeout": 30},
  "map": {"resolution": 0.5},
  "planner": {
    "tau": 0.8, "v_max": 8.0, "a_max": 4.0, "collision_dt": 0.05,
    "pos_quantum": 0.5, "vel_quantum": 0.25, "goal_vel_tolerance": 1.0
  }
}
)json";

constexpr const char* kWallReplan = R"json({
  "name": "wall_replan",
  "seed": 5,
  "world": {
    "bounds": {"min": [0, 0, 0], "max": [36, 16, 5]},
    "boxes": [
      {"min": [20, 0, 0], "max": [20.4, 9.5, 5]},
      {"min": [20, 12.5, 0], "max": [20.4, 16, 5]}
    ]
  },
  "start": {"position": [2, 8, 1.5], "velocity": [4, 0, 0]},
  "goal": {"position": [33, 8, 1.5], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {"type": "goal", "timeout": 30},
  "map": {"resolution": 0.5},
  "lidar": {"max_range": 12.0},
  "planner": {
    "tau": 0.8, "v_max": 4.0, "a_max": 4.0,
    "pos_quantum": 0.5, "vel_quantum": 0.25, "goal_vel_tolerance": 1.0
  }
}
)json";

constexpr const char* kBuildingDoor = R"json({
  "name": "building_door",
  "seed": 7,
  "world": {
    "bounds": {"min": [0, 0, 0], "max": [34, 22, 5]},
    "boxes": [
      {"min": [21, 7, 0], "max": [21.4, 12.4, 5]},
      {"min": [21, 14.6, 0], "max": [21.4, 15, 5]},
      {"min": [21, 12.4, 2.4], "max": [21.4, 14.6, 5]},
      {"min": [28.6, 7, 0], "max": [29, 15, 5]},
      {"min": [21.4, 7, 0], "max": [28.6, 7.4, 5]},
      {"min": [21.4, 14.6, 0], "max": [28.6, 15, 5]},
      {"min": [21.4, 7.4, 4.6], "max": [28.6, 14.6, 5]}
    ],
    "random_cylinders": {
      "count": 10,
      "radius": [0.3, 0.55],
      "z": [0, 5],
      "region": {"min": [5, 2, 0], "max": [17, 20, 5]},
      "clearance": 2.0
    }
  },
  "start": {"position": [2, 5, 1.3]},
  "goal": {"position": [25, 12, 1.3], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {"type": "goal", "timeout": 45},
  "map": {"resolution": 0.25},
  "planner": {
    "tau": 0.8, "v_max": 4.0, "a_max": 3.0, "collision_dt": 0.05,
    "pos_quantum": 0.5, "vel_quantum": 0.25, "goal_vel_tolerance": 0.9
  }
}
)json";

constexpr const char* kLine15 = R"json({
  "name": "line_300m_15",
  "seed": 1,
  "world": {
    "bounds": {"min": [-10, -10, 0], "max": [320, 10, 10]}
  },
  "start": {"position": [0, 0, 5]},
  "goal": {"position": [300, 0, 5], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {
    "type": "line",
    "timeout": 45,
    "scan": false,
    "line": {"direction": [1, 0, 0], "length": 300, "cruise_speed": 15, "ramp_accel": 2.5}
  },
  "map": {"resolution": 0.5}
}
)json";

constexpr const char* kLine15Noisy = R"json({
  "name": "line_300m_15_noisy",
  "seed": 9,
  "world": {
    "bounds": {"min": [-10, -10, 0], "max": [320, 10, 10]}
  },
  "start": {"position": [0, 0, 5]},
  "goal": {"position": [300, 0, 5], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {
    "type": "line",
    "timeout": 45,
    "scan": false,
    "line": {"direction": [1, 0, 0], "length": 300, "cruise_speed": 15, "ramp_accel": 2.5}
  },
  "map": {"resolution": 0.5},
  "noise": {"sigma_pos": 0.05, "sigma_vel": 0.0}
}
)json";

constexpr const char* kLine17p5 = R"json({
  "name": "line_17p5",
  "seed": 1,
  "world": {
    "bounds": {"min": [-10, -10, 0], "max": [420, 10, 10]}
  },
  "start": {"position": [0, 0, 5]},
  "goal": {"position": [400, 0, 5], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {
    "type": "line",
    "timeout": 50,
    "scan": false,
    "line": {"direction": [1, 0, 0], "length": 400, "cruise_speed": 17.5, "ramp_accel": 2.5}
  },
  "map": {"resolution": 0.5}
}
)json";

constexpr const char* kLineSaturated = R"json({
  "name": "line_saturated",
  "seed": 1,
  "world": {
    "bounds": {"min": [-10, -10, 0], "max": [420, 10, 30]}
  },
  "start": {"position": [0, 0, 25]},
  "goal": {"position": [400, 0, 25], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {
    "type": "line",
    "timeout": 40,
    "scan": false,
    "line": {"direction": [1, 0, 0], "length": 400, "cruise_speed": 17.5, "ramp_accel": 2.5}
  },
  "map": {"resolution": 0.5},
  "control": {"f_max": 15.44547375}
}
)json";

constexpr const char* kPlanMovingStart = R"json({
  "name": "plan_moving_start",
  "seed": 3,
  "world": {
    "bounds": {"min": [0, 0, 0], "max": [30, 16, 6]},
    "boxes": [
      {"min": [14, 4, 0], "max": [15, 12, 6]}
    ]
  },
  "start": {"position": [3, 8, 2], "velocity": [4, 0, 0]},
  "goal": {"position": [27, 8, 2], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {"type": "goal", "timeout": 30},
  "map": {"resolution": 0.5},
  "planner": {
    "tau": 0.8, "v_max": 6.0, "a_max": 4.0,
    "pos_quantum": 0.5, "vel_quantum": 0.25, "goal_vel_tolerance": 1.0
  }
}
)json";

constexpr const char* kSmallFree = R"json({
  "name": "small_free",
  "seed": 2,
  "world": {
    "bounds": {"min": [0, 0, 0], "max": [20, 20, 6]}
  },
  "start": {"position": [2, 2, 2]},
  "goal": {"position": [17, 17, 2], "tolerance": 1.0},
  "robot_radius": 0.3,
  "mission": {"type": "goal", "timeout": 30},
  "map": {"resolution": 0.5},
  "planner": {"v_max": 4.0, "pos_quantum": 0.5, "vel_quantum": 0.25}
}
)json";

}  // namespace

const std::vector<BenchScenarioText>& bench_scenario_texts() {
  static const std::vector<BenchScenarioText> all = {
      {"forest", kForest},
      {"wall_replan", kWallReplan},
      {"building_door", kBuildingDoor},
      {"line_300m_15", kLine15},
      {"line_300m_15_noisy", kLine15Noisy},
      {"line_17p5", kLine17p5},
      {"line_saturated", kLineSaturated},
      {"plan_moving_start", kPlanMovingStart},
      {"small_free", kSmallFree},
  };
  return all;
}

Scenario bench_scenario(const std::string& name) {
  for (const auto& entry : bench_scenario_texts()) {
    if (name == entry.name) return parse_scenario_text(entry.text);
  }
  throw std::out_of_range("unknown benchmark scenario: " + name);
}

}  // namespace fastnav::verify
