#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fastnav/sim.hpp"

namespace fastnav {

// Validation failure carrying every issue found, not just the first. Each
// issue names the offending field path.
struct ScenarioError : std::runtime_error {
  explicit ScenarioError(std::vector<std::string> issues_in);
  std::vector<std::string> issues;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  MissionConfig mission;
};

// Parses and fully validates a scenario document (JSON; all angles in
// radians, all lengths in meters). Unknown keys are rejected. Dependent
// defaults (rho from a_max, collision_dt from tau, ...) are resolved to
// concrete values at parse time so a save/load cycle is exact.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

std::string scenario_to_text(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace fastnav
