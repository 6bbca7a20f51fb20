#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fastnav::verify {

struct SidecarOutcome {
  std::string scenario;
  bool pass = false;
  std::string detail;
};

// Regression gate over a scenario directory: every `<name>.json` with a
// sibling `<name>.expected.json` is executed and its logged metrics are
// checked against the sidecar's bounds. Prints one line per scenario.
std::vector<SidecarOutcome> run_sidecar_checks(const std::string& dir, std::ostream& os);

bool all_passed(const std::vector<SidecarOutcome>& results);

}  // namespace fastnav::verify
