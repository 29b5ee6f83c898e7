#pragma once

// Self-verification suites run by `dshell verify`.

#include <cstdint>
#include <string>
#include <vector>

namespace dshell {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string detail;
};

struct VerifyReport {
  static constexpr int schema_version = 1;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool passed() const;
};

// Names accepted by run_verify: jump, ode, specfun, delta.
const std::vector<std::string> &verify_check_names();

// Runs the named checks (all when `only` is empty). Throws InvalidInput for unknown names.
VerifyReport run_verify(std::uint64_t seed, const std::vector<std::string> &only = {});

} // namespace dshell
