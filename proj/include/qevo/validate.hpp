#pragma once

#include <string>
#include <vector>

namespace qevo {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast invariant suite over small instances, backing `qevo-bench validate`:
// decoding endpoints and monotonicity, the rotation-angle lookup table,
// amplitude normalization under repeated rotations, measurement statistics,
// degenerate-parameter behaviour, determinism across reruns and worker
// counts, curve monotonicity and evaluation accounting.
std::vector<CheckResult> run_validation_suite();

}  // namespace qevo
