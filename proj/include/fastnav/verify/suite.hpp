#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fastnav::verify {

// One verification check with its pinned tolerances evaluated; detail carries
// the measured numbers so a failure is diagnosable from the one-line report.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult check_planner_matches_oracle();  // 1
CriterionResult check_drag_lag();                // 2
CriterionResult check_high_speed_tracking();     // 3
CriterionResult check_refinement_quality();      // 4
CriterionResult check_replan_continuity();       // 5
CriterionResult check_door_mission();            // 6
CriterionResult check_determinism();             // 7

void print_result(const CriterionResult& r, std::ostream& os);

// Runs every check in order, printing one line each as results arrive.
std::vector<CriterionResult> run_all_checks(std::ostream& os);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace fastnav::verify
