#pragma once

#include <string>
#include <vector>

namespace formkit {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string details;
  long ms = 0;
};

/// The release gate: every entry must pass.
std::vector<CriterionResult> run_acceptance();

}  // namespace formkit
