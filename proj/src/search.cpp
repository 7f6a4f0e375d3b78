#include "diaboli/search.hpp"

#include "diaboli/error.hpp"

namespace diaboli {

SolubilityOracle berry_oracle(Variant variant, BerryOptions options) {
  return [variant, options](const ViolationDiagonal& d) { return solubility(d, variant, options); };
}

SolubilityOracle brute_oracle() {
  return [](const ViolationDiagonal& d) { return brute_force_solubility(d).soluble; };
}

namespace {

bool ask(const SolubilityOracle& oracle, const ViolationDiagonal& d, SearchTrace& trace) {
  ++trace.oracle_calls;
  try {
    return oracle(d);
  } catch (const Error& e) {
    throw Error(ErrorKind::OracleFailure, e.what());
  }
}

}  // namespace

SearchTrace solve(const ViolationDiagonal& diag, const SolubilityOracle& oracle) {
  SearchTrace trace;
  if (!ask(oracle, diag, trace)) return trace;

  auto first = Assignment{0};
  std::size_t size = diag.size();
  while (size > 1) {
    const std::size_t half = size / 2;
    SearchIteration it;
    it.mask_size = size;
    it.first = first;
    const auto lower = restrict(diag, SubspaceMask::range(first, first + static_cast<Assignment>(half)));
    it.lower_has_phase = ask(oracle, lower, trace);
    ++trace.half_space_calls;
    it.chose_lower = it.lower_has_phase;
    if (it.chose_lower) {
      size = half;
    } else {
      first += static_cast<Assignment>(half);
      size -= half;
    }
    trace.iterations.push_back(it);
  }
  if (diag[first] != 0) {
    throw Error(ErrorKind::InternalContradiction,
                "bisection ended on assignment " + std::to_string(first) + " violating " +
                    std::to_string(diag[first]) + " clauses");
  }
  trace.result = first;
  return trace;
}

nlohmann::json to_json(const SearchTrace& trace) {
  nlohmann::json j;
  j["result"] = trace.result ? nlohmann::json(*trace.result) : nlohmann::json("insoluble");
  j["oracle_calls"] = trace.oracle_calls;
  j["half_space_calls"] = trace.half_space_calls;
  nlohmann::json its = nlohmann::json::array();
  for (const auto& it : trace.iterations) {
    its.push_back({{"mask_size", it.mask_size},
                   {"first", it.first},
                   {"phase_outcome", it.lower_has_phase ? "pi" : "0"},
                   {"chosen_half", it.chose_lower ? "lower" : "upper"}});
  }
  j["iterations"] = std::move(its);
  return j;
}

}  // namespace diaboli
