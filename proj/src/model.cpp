#include "commsat/model.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "commsat/error.hpp"

namespace commsat {

Literal Literal::from_dimacs(std::int64_t code) {
  if (code == 0 || code > std::int64_t(UINT32_MAX) || code < -std::int64_t(UINT32_MAX))
    fail(ErrorKind::Domain, fmt::format("literal code {} out of range", code));
  return {static_cast<Var>(code < 0 ? -code : code), code > 0};
}

Clause Clause::three(Literal a, Literal b, Literal c) {
  Clause clause{a, b, c};
  if (!clause.is_three_sat())
    fail(ErrorKind::Domain,
         fmt::format("clause ({} {} {}) must have three distinct nonzero variables",
                     a.to_dimacs(), b.to_dimacs(), c.to_dimacs()));
  return clause;
}

bool Clause::is_three_sat() const {
  if (literals_.size() != 3) return false;
  const Var a = literals_[0].var, b = literals_[1].var, c = literals_[2].var;
  return a != 0 && b != 0 && c != 0 && a != b && a != c && b != c;
}

Clause Clause::normalized() const {
  auto sorted = literals_;
  std::sort(sorted.begin(), sorted.end());
  return Clause(std::move(sorted));
}

bool Formula::is_three_sat() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.is_three_sat(); });
}

void Formula::validate() const {
  for (std::size_t i = 0; i < clauses.size(); ++i)
    for (const Literal& lit : clauses[i])
      if (lit.var == 0 || lit.var > n)
        fail(ErrorKind::Domain, fmt::format("clause {} references variable {} outside 1..{}", i, lit.var, n));
}

Assignment::Assignment(std::vector<bool> values) : values_(values.begin(), values.end()) {}

Assignment Assignment::random(Var n, Rng& rng) {
  Assignment a(n, false);
  for (Var v = 1; v <= n; ++v) a.values_[v - 1] = rng.coin() ? 1 : 0;
  return a;
}

bool Assignment::value(Var v) const {
  if (!contains(v)) fail(ErrorKind::Domain, fmt::format("variable {} outside assignment domain 1..{}", v, size()));
  return values_[v - 1] != 0;
}

void Assignment::set(Var v, bool value) {
  if (!contains(v)) fail(ErrorKind::Domain, fmt::format("variable {} outside assignment domain 1..{}", v, size()));
  values_[v - 1] = value ? 1 : 0;
}

Assignment Assignment::complement() const {
  Assignment flipped = *this;
  for (auto& x : flipped.values_) x = x ? 0 : 1;
  return flipped;
}

int clause_type(const Clause& clause, const Assignment& a) {
  int count = 0;
  for (const Literal& lit : clause) count += a.satisfies(lit) ? 1 : 0;
  return count;
}

Evaluation evaluate(const Formula& f, const Assignment& a) {
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    if (clause_type(f.clauses[i], a) == 0) return {false, i};
  return {};
}

}  // namespace commsat
