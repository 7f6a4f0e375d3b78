#include "diaboli/instance.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "diaboli/error.hpp"

namespace diaboli {

namespace {

void validate_clause(const std::vector<Literal>& lits, int n_vars, std::size_t index) {
  const auto where = " (clause " + std::to_string(index + 1) + ")";
  if (lits.size() != 3) {
    throw Error(ErrorKind::ClauseArityError,
                "expected 3 literals, got " + std::to_string(lits.size()) + where);
  }
  for (const auto& l : lits) {
    if (l.var < 1 || l.var > n_vars) {
      throw Error(ErrorKind::VariableOutOfRange,
                  "variable " + std::to_string(l.var) + " not in [1," + std::to_string(n_vars) + "]" + where);
    }
  }
  if (lits[0].var == lits[1].var || lits[0].var == lits[2].var || lits[1].var == lits[2].var) {
    throw Error(ErrorKind::DuplicateVariableInClause, "repeated variable" + where);
  }
}

void check_variable_count(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "variable count must be positive");
  if (n > kMaxVariables) {
    throw Error(ErrorKind::ProblemTooLarge,
                std::to_string(n) + " variables exceeds the limit of " + std::to_string(kMaxVariables));
  }
}

}  // namespace

CnfInstance CnfInstance::make(int n_vars, std::vector<Clause> clauses) {
  check_variable_count(n_vars);
  if (clauses.empty()) throw Error(ErrorKind::ClauseCountMismatch, "at least one clause is required");
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    validate_clause({clauses[c].begin(), clauses[c].end()}, n_vars, c);
  }
  return CnfInstance(n_vars, std::move(clauses));
}

ViolationDiagonal::ViolationDiagonal(int n_vars, std::vector<int> entries)
    : n_vars_(n_vars), entries_(std::move(entries)) {
  check_variable_count(n_vars_);
  if (entries_.empty() || entries_.size() > (std::size_t{1} << n_vars_)) {
    throw Error(ErrorKind::InvalidArgument, "diagonal length must be in [1, 2^n]");
  }
  if (std::any_of(entries_.begin(), entries_.end(), [](int e) { return e < 0; })) {
    throw Error(ErrorKind::InvalidArgument, "violation counts must be non-negative");
  }
}

bool ViolationDiagonal::soluble() const {
  return std::find(entries_.begin(), entries_.end(), 0) != entries_.end();
}

CnfInstance parse_dimacs(std::istream& in) {
  std::string line;
  bool have_header = false;
  int n_vars = 0;
  long declared = 0;
  std::vector<Clause> clauses;
  std::vector<Literal> pending;

  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const char lead = line[first];
    if (lead == 'c') continue;
    if (lead == '%') break;  // SATLIB trailer
    std::istringstream tokens(line);
    if (lead == 'p') {
      if (have_header) throw Error(ErrorKind::MalformedHeader, "duplicate problem line");
      std::string p, fmt, extra;
      if (!(tokens >> p >> fmt >> n_vars >> declared) || p != "p" || fmt != "cnf" || (tokens >> extra)) {
        throw Error(ErrorKind::MalformedHeader, "expected 'p cnf <n> <m>', got '" + line + "'");
      }
      if (n_vars < 1 || declared < 1) {
        throw Error(ErrorKind::MalformedHeader, "variable and clause counts must be positive");
      }
      check_variable_count(n_vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw Error(ErrorKind::MalformedHeader, "clause data before problem line");
    std::string tok;
    while (tokens >> tok) {
      long value = 0;
      std::size_t used = 0;
      try {
        value = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw Error(ErrorKind::MalformedHeader, "bad literal token '" + tok + "'");
      if (value == 0) {
        validate_clause(pending, n_vars, clauses.size());
        clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
        continue;
      }
      if (pending.size() == 3) {
        throw Error(ErrorKind::ClauseArityError,
                    "more than 3 literals (clause " + std::to_string(clauses.size() + 1) + ")");
      }
      const long var = value < 0 ? -value : value;
      pending.push_back({static_cast<int>(std::min<long>(var, 1L << 30)), value < 0});
    }
  }
  if (!have_header) throw Error(ErrorKind::MalformedHeader, "missing problem line");
  if (!pending.empty()) {
    // Tolerate a missing terminator on the final clause.
    validate_clause(pending, n_vars, clauses.size());
    clauses.push_back({pending[0], pending[1], pending[2]});
  }
  if (static_cast<long>(clauses.size()) != declared) {
    throw Error(ErrorKind::ClauseCountMismatch,
                "header declares " + std::to_string(declared) + " clauses, found " + std::to_string(clauses.size()));
  }
  return CnfInstance::make(n_vars, std::move(clauses));
}

CnfInstance parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

std::string render_dimacs(const CnfInstance& inst) {
  std::ostringstream out;
  out << "p cnf " << inst.n_vars() << ' ' << inst.clause_count() << '\n';
  for (const auto& clause : inst.clauses()) {
    for (const auto& l : clause) out << (l.negated ? -l.var : l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

ViolationDiagonal violation_diagonal(const CnfInstance& inst) {
  const std::size_t dim = std::size_t{1} << inst.n_vars();
  std::vector<int> entries(dim, 0);
  // A clause is violated exactly when each variable takes the value that falsifies
  // its literal; enumerate the 2^(n-3) completions of that partial assignment.
  for (const auto& clause : inst.clauses()) {
    std::uint32_t fixed_mask = 0;
    std::uint32_t fixed_bits = 0;
    for (const auto& l : clause) {
      const std::uint32_t bit = 1u << (l.var - 1);
      fixed_mask |= bit;
      if (l.negated) fixed_bits |= bit;
    }
    const std::uint32_t free_mask = static_cast<std::uint32_t>(dim - 1) & ~fixed_mask;
    // Iterate over all submasks of free_mask.
    std::uint32_t sub = free_mask;
    while (true) {
      ++entries[fixed_bits | sub];
      if (sub == 0) break;
      sub = (sub - 1) & free_mask;
    }
  }
  return ViolationDiagonal(inst.n_vars(), std::move(entries));
}

SolubilityReport brute_force_solubility(const ViolationDiagonal& diag) {
  SolubilityReport report;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] == 0) report.solutions.push_back(static_cast<Assignment>(i));
  }
  report.soluble = !report.solutions.empty();
  return report;
}

ViolationDiagonal worst_case_diagonal(int n, std::optional<Assignment> solution_index) {
  check_variable_count(n);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<int> entries(dim, 1);
  if (solution_index) {
    if (*solution_index >= dim) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "solution index " + std::to_string(*solution_index) + " >= " + std::to_string(dim));
    }
    entries[*solution_index] = 0;
  }
  return ViolationDiagonal(n, std::move(entries));
}

CnfInstance random_instance(int n_vars, int n_clauses, std::mt19937_64& rng) {
  if (n_vars < 3) throw Error(ErrorKind::InvalidArgument, "random 3-SAT needs at least 3 variables");
  std::uniform_int_distribution<int> pick_var(1, n_vars);
  std::bernoulli_distribution pick_sign(0.5);
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(n_clauses));
  for (int c = 0; c < n_clauses; ++c) {
    Clause clause;
    for (int k = 0; k < 3; ++k) {
      int v = 0;
      do {
        v = pick_var(rng);
      } while ((k > 0 && clause[0].var == v) || (k > 1 && clause[1].var == v));
      clause[k] = {v, pick_sign(rng)};
    }
    clauses.push_back(clause);
  }
  return CnfInstance::make(n_vars, std::move(clauses));
}

void write_diagonal_csv(std::ostream& out, const ViolationDiagonal& diag) {
  out << "index,violations\n";
  for (std::size_t i = 0; i < diag.size(); ++i) out << i << ',' << diag[i] << '\n';
}

}  // namespace diaboli
