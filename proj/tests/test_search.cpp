#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diaboli/error.hpp"
#include "diaboli/search.hpp"

using namespace diaboli;

namespace {

// Replays the bisection with direct scans of the diagonal.
std::vector<bool> replay(const ViolationDiagonal& d) {
  std::vector<bool> outcomes;
  std::size_t first = 0;
  std::size_t size = d.size();
  while (size > 1) {
    const std::size_t half = size / 2;
    bool lower = false;
    for (std::size_t i = first; i < first + half; ++i) lower = lower || d[i] == 0;
    outcomes.push_back(lower);
    if (!lower) first += half;
    size = lower ? half : size - half;
  }
  return outcomes;
}

}  // namespace

TEST_CASE("worst case n = 3 with solution 5") {
  const auto d = worst_case_diagonal(3, 5);
  for (const auto& oracle : {brute_oracle(), berry_oracle(Variant::Unscaled)}) {
    const auto t = solve(d, oracle);
    REQUIRE(t.result);
    CHECK(*t.result == 5);
    REQUIRE(t.iterations.size() == 3);
    CHECK(t.iterations[0].mask_size == 8);
    CHECK_FALSE(t.iterations[0].chose_lower);  // {0..3} has no solution
    CHECK(t.iterations[1].chose_lower);        // {4,5}
    CHECK_FALSE(t.iterations[2].chose_lower);  // {4} -> 5
    CHECK(t.half_space_calls == 3);
    CHECK(t.oracle_calls == 4);
  }
}

TEST_CASE("insoluble input stops after the initial check") {
  std::vector<Clause> clauses;
  for (int mask = 0; mask < 8; ++mask) {
    clauses.push_back({Literal{1, (mask & 1) != 0}, Literal{2, (mask & 2) != 0}, Literal{3, (mask & 4) != 0}});
  }
  const auto t = solve(violation_diagonal(CnfInstance::make(3, clauses)), berry_oracle(Variant::Unscaled));
  CHECK_FALSE(t.result);
  CHECK(t.oracle_calls == 1);
  CHECK(t.iterations.empty());
  CHECK(to_json(t)["result"] == "insoluble");
}

TEST_CASE("worst case n = 7 finds 127 in seven half-space calls") {
  const auto t = solve(worst_case_diagonal(7, 127), berry_oracle(Variant::Unscaled));
  REQUIRE(t.result);
  CHECK(*t.result == 127);
  CHECK(t.half_space_calls == 7);
  std::size_t expected = 128;
  for (const auto& it : t.iterations) {
    CHECK(it.mask_size == expected);
    expected /= 2;
  }
}

TEST_CASE("berry and brute oracles make identical decisions") {
  std::mt19937_64 rng(12);
  int soluble = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 4;
    const auto d = violation_diagonal(random_instance(n, 2 + static_cast<int>(rng() % (4 * n)), rng));
    const auto a = solve(d, brute_oracle());
    const auto b = solve(d, berry_oracle(Variant::Unscaled));
    CHECK(a.result == b.result);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t k = 0; k < a.iterations.size(); ++k) {
      CHECK(a.iterations[k].chose_lower == b.iterations[k].chose_lower);
    }
    if (a.result) {
      ++soluble;
      CHECK(d[*a.result] == 0);
      CHECK(a.half_space_calls == n);
      const auto outcomes = replay(d);
      for (std::size_t k = 0; k < outcomes.size(); ++k) CHECK(a.iterations[k].lower_has_phase == outcomes[k]);
      // Lowest-index preference: the result is the smallest solution.
      CHECK(*a.result == brute_force_solubility(d).solutions.front());
    }
  }
  CHECK(soluble > 10);
}

TEST_CASE("a faulty oracle is caught") {
  const auto d = worst_case_diagonal(3, 6);
  try {
    solve(d, [](const ViolationDiagonal&) { return true; });
    FAIL("expected InternalContradiction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InternalContradiction);
  }
  try {
    solve(d, [](const ViolationDiagonal&) -> bool { throw Error(ErrorKind::DegenerateOnLoop, "test"); });
    FAIL("expected OracleFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OracleFailure);
  }
}
