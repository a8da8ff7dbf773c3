#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "commsat/model.hpp"

namespace commsat {

enum class SolveStatus { Sat, Unsat, LimitReached };

const char* to_string(SolveStatus status) noexcept;

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t flips = 0;
  double elapsed_seconds = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::LimitReached;
  std::optional<Assignment> model;  ///< present iff status == Sat, always verified
  SolveStats stats;
};

struct DpllLimits {
  std::uint64_t max_decisions = UINT64_MAX;
  double max_seconds = 0.0;  ///< 0 disables the time limit
};

/// Complete backtracking search with unit propagation and pure-literal
/// elimination. Branches on the lowest-indexed unassigned variable that
/// still occurs in an unsatisfied clause, trying TRUE first, so decision
/// counts are reproducible across runs and machines.
SolveOutcome dpll_solve(const Formula& f, const DpllLimits& limits = {});

struct WalkSatOptions {
  double noise = 0.5;
  std::uint64_t max_flips = 10'000'000;
  std::uint64_t seed = 0;
  double max_seconds = 0.0;
};

/// WalkSAT-style local search: a zero-break flip in the chosen falsified
/// clause is always taken, otherwise a random variable with probability
/// `noise` and the lowest-break variable (lowest index on ties) if not.
/// Never reports Unsat.
SolveOutcome walksat_probe(const Formula& f, const WalkSatOptions& options = {});

inline constexpr Var kBruteForceMaxVars = 25;

/// Number of satisfying assignments, by enumeration. Throws TooLarge above 25 variables.
std::uint64_t brute_force_count(const Formula& f);

/// Calls `visit` on every model, in increasing order of the bitmask where
/// bit i holds variable i + 1.
void for_each_model(const Formula& f, const std::function<void(const Assignment&)>& visit);

}  // namespace commsat
