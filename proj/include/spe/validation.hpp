#pragma once
// Self-check suite behind `spe validate`: named invariants and oracle
// comparisons, each reduced to a deviation that must not exceed a tolerance.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace spe {

struct CheckResult {
  std::string name;
  double deviation;
  double tolerance;
  bool passed;
  std::string detail;
};

struct ValidationOptions {
  /// Checks whose tolerance is replaced by a negative one, so they must fail.
  std::vector<std::string> corrupt;
  /// Directory holding <schema>_v<version>.header files.
  std::filesystem::path golden_dir;
};

/// SPE_GOLDEN_DIR from the environment, else the directory baked in at build time.
std::filesystem::path default_golden_dir();

const std::vector<std::string>& validation_check_names();

/// Throws ConfigError if `corrupt` names an unknown check.
std::vector<CheckResult> run_validation(const ValidationOptions& opts);

/// Prints the pass/fail table; 0 if all pass, 1 otherwise, 2 on bad options.
int cmd_validate(const ValidationOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace spe
