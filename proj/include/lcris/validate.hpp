#pragma once

// Built-in oracle suites run by `lcris_cli validate`.

#include <ostream>
#include <string>
#include <vector>

namespace lcris {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  double worst = 0.0;      // largest observed error (suite-specific units)
  double tolerance = 0.0;
  std::string detail;
};

SuiteResult check_quadratic_form(std::size_t instances = 200);
SuiteResult check_release_times(std::size_t transitions = 1000);
SuiteResult check_gradient(std::size_t points = 100);
SuiteResult check_benchmark_exhaustive(std::size_t instances = 20);

std::vector<SuiteResult> run_validation_suites();

/// Prints one line per suite; returns 0 when all pass, else the validation-failure exit code.
int cmd_validate(std::ostream& os);

}  // namespace lcris
