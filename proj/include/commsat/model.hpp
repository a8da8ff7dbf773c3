#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "commsat/rng.hpp"

namespace commsat {

using Var = std::uint32_t;

struct Literal {
  Var var = 0;
  bool positive = true;

  /// Builds a literal from its signed DIMACS form (negative means negated).
  static Literal from_dimacs(std::int64_t code);
  std::int64_t to_dimacs() const { return positive ? std::int64_t(var) : -std::int64_t(var); }
  Literal operator~() const { return {var, !positive}; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Disjunction of literals. Generated clauses always have width 3 with
/// distinct variables; clauses read from foreign DIMACS files may not.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {}
  Clause(std::initializer_list<Literal> literals) : literals_(literals) {}

  /// Checked constructor for a 3-SAT clause: throws unless the three variables are distinct and nonzero.
  static Clause three(Literal a, Literal b, Literal c);

  std::span<const Literal> literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  const Literal& operator[](std::size_t i) const { return literals_[i]; }
  auto begin() const { return literals_.begin(); }
  auto end() const { return literals_.end(); }

  /// Width 3 with pairwise-distinct variables.
  bool is_three_sat() const;

  /// Copy with literals sorted; for duplicate detection only.
  Clause normalized() const;

  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> literals_;
};

struct Formula {
  Var n = 0;
  std::vector<Clause> clauses;

  std::size_t m() const { return clauses.size(); }
  bool is_three_sat() const;
  /// Throws Domain if a literal's variable is 0 or exceeds n.
  void validate() const;

  friend bool operator==(const Formula&, const Formula&) = default;
};

/// Total truth assignment over variables 1..n.
class Assignment {
 public:
  Assignment() = default;
  Assignment(Var n, bool value) : values_(n, value ? 1 : 0) {}
  explicit Assignment(std::vector<bool> values);

  static Assignment random(Var n, Rng& rng);

  Var size() const { return static_cast<Var>(values_.size()); }
  bool contains(Var v) const { return v >= 1 && v <= size(); }
  /// Throws Domain when v is outside 1..size().
  bool value(Var v) const;
  void set(Var v, bool value);
  bool satisfies(Literal lit) const { return value(lit.var) == lit.positive; }
  Assignment complement() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

/// Number of literals in `clause` that are true under `a`.
int clause_type(const Clause& clause, const Assignment& a);

struct Evaluation {
  bool satisfied = true;
  std::optional<std::size_t> falsified_clause;

  explicit operator bool() const { return satisfied; }
};

/// Satisfied iff every clause has a true literal; otherwise reports the first falsified clause.
Evaluation evaluate(const Formula& f, const Assignment& a);

}  // namespace commsat
