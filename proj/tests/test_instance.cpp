#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "diaboli/error.hpp"
#include "diaboli/instance.hpp"

using namespace diaboli;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse_dimacs(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return ErrorKind::InvalidArgument;
}

// Independent evaluator: decode the assignment bit by bit and test each literal.
int count_violations(const CnfInstance& inst, unsigned assignment) {
  int violated = 0;
  for (const auto& clause : inst.clauses()) {
    bool any_true = false;
    for (const auto& lit : clause) {
      const bool value = ((assignment >> (lit.var - 1)) & 1u) == 1u;
      any_true = any_true || (lit.negated ? !value : value);
    }
    violated += any_true ? 0 : 1;
  }
  return violated;
}

}  // namespace

TEST_CASE("parse_dimacs accepts a single clause") {
  const auto inst = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
  CHECK(inst.n_vars() == 3);
  REQUIRE(inst.clause_count() == 1);
  const Clause expected{Literal{1, false}, Literal{2, false}, Literal{3, false}};
  CHECK(inst.clauses()[0] == expected);
}

TEST_CASE("parse_dimacs handles comments, negation and multi-line clauses") {
  const auto inst = parse_dimacs("c a comment\nc another\np cnf 4 2\n-1 2\n 4 0 -2 -3 -4 0\n%\n0\n");
  CHECK(inst.clause_count() == 2);
  CHECK(inst.clauses()[0][0] == Literal{1, true});
  CHECK(inst.clauses()[1][2] == Literal{4, true});
}

TEST_CASE("parse_dimacs error paths") {
  CHECK(kind_of("p cnf 3 1\n1 2 0") == ErrorKind::ClauseArityError);
  CHECK(kind_of("p cnf 3 1\n1 2 3 -1 0") == ErrorKind::ClauseArityError);
  CHECK(kind_of("p cnf 2 1\n1 -1 2 0") == ErrorKind::DuplicateVariableInClause);
  CHECK(kind_of("p cnf 3 1\n1 2 4 0") == ErrorKind::VariableOutOfRange);
  CHECK(kind_of("p cnf 3 2\n1 2 3 0") == ErrorKind::ClauseCountMismatch);
  CHECK(kind_of("1 2 3 0") == ErrorKind::MalformedHeader);
  CHECK(kind_of("p dnf 3 1\n1 2 3 0") == ErrorKind::MalformedHeader);
  CHECK(kind_of("p cnf 3\n1 2 3 0") == ErrorKind::MalformedHeader);
  CHECK(kind_of("p cnf 3 1\n1 x 3 0") == ErrorKind::MalformedHeader);
  CHECK(kind_of("p cnf 17 1\n1 2 3 0") == ErrorKind::ProblemTooLarge);
}

TEST_CASE("violation diagonal of a single clause") {
  const auto diag = violation_diagonal(parse_dimacs("p cnf 3 1\n1 2 3 0"));
  CHECK(diag.entries() == std::vector<int>{1, 0, 0, 0, 0, 0, 0, 0});
  const auto report = brute_force_solubility(diag);
  CHECK(report.soluble);
  CHECK(report.solutions == std::vector<Assignment>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("every polarity pattern over three variables is insoluble") {
  std::vector<Clause> clauses;
  for (int mask = 0; mask < 8; ++mask) {
    clauses.push_back({Literal{1, (mask & 1) != 0}, Literal{2, (mask & 2) != 0}, Literal{3, (mask & 4) != 0}});
  }
  const auto diag = violation_diagonal(CnfInstance::make(3, clauses));
  CHECK(diag.entries() == std::vector<int>(8, 1));
  const auto report = brute_force_solubility(diag);
  CHECK_FALSE(report.soluble);
  CHECK(report.solutions.empty());
}

TEST_CASE("violation diagonal matches a per-assignment evaluator") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(4, 10, rng);
    const auto diag = violation_diagonal(inst);
    REQUIRE(diag.size() == 16);
    for (unsigned a = 0; a < 16; ++a) CHECK(diag[a] == count_violations(inst, a));
  }
}

TEST_CASE("properties over random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % 40);
    const auto inst = random_instance(n, m, rng);
    const auto diag = violation_diagonal(inst);

    // Each 3-clause over distinct variables is violated by exactly 2^(n-3) assignments.
    long total = 0;
    for (int e : diag.entries()) {
      CHECK(e >= 0);
      CHECK(e <= m);
      total += e;
    }
    CHECK(total == static_cast<long>(m) << (n - 3));

    CHECK(parse_dimacs(render_dimacs(inst)) == inst);

    // Solubility via a path that never builds the diagonal.
    bool direct = false;
    for (unsigned a = 0; a < (1u << n) && !direct; ++a) direct = count_violations(inst, a) == 0;
    CHECK(brute_force_solubility(diag).soluble == direct);
    CHECK(diag.soluble() == direct);
  }
}

TEST_CASE("worst-case diagonals") {
  CHECK(worst_case_diagonal(3, 7).entries() == std::vector<int>{1, 1, 1, 1, 1, 1, 1, 0});
  CHECK(worst_case_diagonal(2, std::nullopt).entries() == std::vector<int>{1, 1, 1, 1});
  const auto big = worst_case_diagonal(7, 127);
  CHECK(big.size() == 128);
  CHECK(std::count(big.entries().begin(), big.entries().end(), 0) == 1);
  CHECK(big[127] == 0);

  const auto report = brute_force_solubility(worst_case_diagonal(3, 7));
  CHECK(report.soluble);
  CHECK(report.solutions == std::vector<Assignment>{7});

  CHECK_THROWS_AS(worst_case_diagonal(3, 8), Error);
  try {
    worst_case_diagonal(3, 8);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }
  CHECK(worst_case_diagonal(16, 0).size() == 65536);
  CHECK_THROWS_AS(worst_case_diagonal(17, 0), Error);
}

TEST_CASE("diagonal CSV export") {
  std::ostringstream out;
  write_diagonal_csv(out, worst_case_diagonal(2, 3));
  CHECK(out.str() == "index,violations\n0,1\n1,1\n2,1\n3,0\n");
}
