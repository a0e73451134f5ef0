// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace olion::verify {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full invariant suite (polar oracle, Newton-Schulz fidelity,
/// trace identity, isotropy-bound audit, epsilon scaling law, descent
/// certification, desk-scale convergence, implicit-bias ordering, reduction
/// checks, persistence, gradient oracles). Scratch files go under
/// `scratch_dir`. Progress lines stream to `out` as criteria finish.
std::vector<CriterionResult> run_all(const std::filesystem::path& scratch_dir,
                                     std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace olion::verify
