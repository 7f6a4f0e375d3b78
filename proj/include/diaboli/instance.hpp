#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace diaboli {

/// Largest supported variable count; the violation diagonal has 2^n entries.
inline constexpr int kMaxVariables = 16;

struct Literal {
  int var = 1;          // 1-based variable index
  bool negated = false;

  /// True when this literal evaluates to true under the assignment bit pattern.
  bool satisfied_by(std::uint32_t assignment) const {
    const bool value = (assignment >> (var - 1)) & 1u;
    return value != negated;
  }
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

/// A validated 3-SAT formula. Construct through make() or parse_dimacs().
class CnfInstance {
 public:
  /// Validates arity, variable range, distinct variables per clause and m >= 1.
  static CnfInstance make(int n_vars, std::vector<Clause> clauses);

  int n_vars() const { return n_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t clause_count() const { return clauses_.size(); }

  friend bool operator==(const CnfInstance&, const CnfInstance&) = default;

 private:
  CnfInstance(int n, std::vector<Clause> c) : n_vars_(n), clauses_(std::move(c)) {}
  int n_vars_;
  std::vector<Clause> clauses_;
};

/// Assignment index: bit k holds the value of variable k+1 (0 = false).
using Assignment = std::uint32_t;

/// Diagonal of the problem Hamiltonian: entries[i] = clauses violated by assignment i.
///
/// The length is not forced to a power of two so that restricted subproblems
/// (half-spaces during the bisection search) can reuse the same type; n_vars
/// records the variable count of the full problem the entries came from.
class ViolationDiagonal {
 public:
  ViolationDiagonal(int n_vars, std::vector<int> entries);

  int n_vars() const { return n_vars_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<int>& entries() const { return entries_; }
  int operator[](std::size_t i) const { return entries_[i]; }

  bool soluble() const;

  friend bool operator==(const ViolationDiagonal&, const ViolationDiagonal&) = default;

 private:
  int n_vars_;
  std::vector<int> entries_;
};

CnfInstance parse_dimacs(std::istream& in);
CnfInstance parse_dimacs(std::string_view text);

/// Canonical writer: header, then one clause per line, no comments.
std::string render_dimacs(const CnfInstance& inst);

ViolationDiagonal violation_diagonal(const CnfInstance& inst);

struct SolubilityReport {
  bool soluble = false;
  std::vector<Assignment> solutions;
};

SolubilityReport brute_force_solubility(const ViolationDiagonal& diag);

/// One zero entry at solution_index and ones elsewhere; all ones when no index is given.
ViolationDiagonal worst_case_diagonal(int n, std::optional<Assignment> solution_index);

/// Uniformly random clauses over distinct variables with random polarities.
CnfInstance random_instance(int n_vars, int n_clauses, std::mt19937_64& rng);

/// CSV `index,violations`.
void write_diagonal_csv(std::ostream& out, const ViolationDiagonal& diag);

}  // namespace diaboli
