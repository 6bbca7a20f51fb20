#pragma once

#include <string>
#include <vector>

#include "fastnav/scenario.hpp"

namespace fastnav::verify {

// Benchmark scenarios used by the verification suite. The authored JSON text
// is the single source of truth: the files committed under scenarios/ carry
// the same bytes (a test enforces this), and the suite parses the text
// directly so it cannot drift from the checked-in files.
struct BenchScenarioText {
  const char* name;
  const char* text;
};

const std::vector<BenchScenarioText>& bench_scenario_texts();

// Parses the named benchmark; throws std::out_of_range for unknown names.
Scenario bench_scenario(const std::string& name);

}  // namespace fastnav::verify
