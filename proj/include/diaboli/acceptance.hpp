#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diaboli::acceptance {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<std::string> details;
};

struct CriterionInfo {
  std::string id;
  std::string title;
};

std::vector<CriterionInfo> list();

/// Runs the criteria whose id is in `only` (all when empty), printing one
/// PASS/FAIL line per criterion plus indented details to `out`.
std::vector<CriterionResult> run(std::ostream& out, const std::vector<std::string>& only = {});

}  // namespace diaboli::acceptance
