#pragma once

#include <string>
#include <vector>

namespace qgain {

struct SelftestCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  long long lemma_cases = 0;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct SelftestOptions {
  /// Test hook (negative control): added to the optimal-QFI closed form
  /// inside the oracle-equivalence check. Nonzero values must make the
  /// selftest fail.
  double qfi_nds_perturbation = 0.0;
};

/// Built-in consistency suite: exhaustive combinatorial identity check,
/// finite-difference oracle equivalence over the standard grid, and
/// lossless reductions of every lossy formula.
SelftestReport run_selftest(const SelftestOptions& options = {});

}  // namespace qgain
