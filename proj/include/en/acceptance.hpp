#pragma once

// The numbered acceptance criteria, shared by the test binary and `en selftest`.

#include <functional>
#include <string>
#include <vector>

#include "en/evolve.hpp"

namespace en {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Skips the x = 400 boundary-layer points and the grid refinement studies.
  bool quick = false;
  /// Criteria to run; empty means all of 1..15.
  std::vector<int> only;
  /// Replaces the evolution multiplier; a test hook for a corrupted symbol.
  std::function<Multiplier(const DiagParams&)> multiplier_factory;
};

inline constexpr int kCriterionCount = 15;

std::string criterion_title(int id);

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// Runs the selected criteria in order; `report` sees each result as it lands.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opt,
    const std::function<void(const CriterionResult&)>& report = {});

}  // namespace en
