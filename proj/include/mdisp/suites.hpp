#pragma once

#include <string>
#include <vector>

// Self-contained verification suites over the whole library.  Each criterion
// runs a batch of checks with pinned tolerances and reports a single verdict
// plus the worst measured value, so the CLI and the standalone checker can
// share one implementation.

namespace mdisp::suites {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool informational = false;  // reported but never fails the run
  double measured = 0.0;       // worst observed value (criterion-specific)
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

CriterionResult run_criterion(int id);

// named groups: "duality", "cayley", "fk", "maxwell1d", "all"
std::vector<int> criteria_in_suite(const std::string& name);
std::vector<CriterionResult> run_suite(const std::string& name);

}  // namespace mdisp::suites
