#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "diaboli/holonomy.hpp"

namespace diaboli {

/// Solubility test applied to a (possibly restricted) violation diagonal.
using SolubilityOracle = std::function<bool(const ViolationDiagonal&)>;

SolubilityOracle berry_oracle(Variant variant, BerryOptions options = {});
SolubilityOracle brute_oracle();

struct SearchIteration {
  std::size_t mask_size = 0;    // candidates before the split
  Assignment first = 0;         // first index of the current candidate range
  bool lower_has_phase = false; // oracle outcome on the lower half
  bool chose_lower = false;
};

struct SearchTrace {
  std::vector<SearchIteration> iterations;
  std::optional<Assignment> result;  // empty: insoluble
  int oracle_calls = 0;              // including the initial full-space check
  int half_space_calls = 0;
};

/// Bisection over index halves, always testing (and preferring) the lower half.
SearchTrace solve(const ViolationDiagonal& diag, const SolubilityOracle& oracle);

nlohmann::json to_json(const SearchTrace& trace);

}  // namespace diaboli
