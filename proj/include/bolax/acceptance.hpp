#pragma once

#include <string>
#include <vector>

namespace bolax {

struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string details;
};

/// Runs one acceptance criterion (1-based index, 1..15).
CriterionResult run_criterion(int index);

/// Runs the full acceptance battery in order.
std::vector<CriterionResult> run_acceptance();

std::string acceptance_to_json(const std::vector<CriterionResult>& results);

inline constexpr int kCriterionCount = 15;

}  // namespace bolax
