#pragma once

#include <string_view>

#include "commsat/rng.hpp"

namespace commsat {

/// Probabilities of emitting a clause with 1, 2 or 3 literals true under the
/// planted solution. Type 0 has probability zero by construction.
struct ClauseDistribution {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 1.0;

  /// Validated construction from (p1, p2); p3 = 1 - p1 - p2.
  static ClauseDistribution from_p1_p2(double p1, double p2);
  void validate() const;

  friend bool operator==(const ClauseDistribution&, const ClauseDistribution&) = default;
};

inline constexpr double kProbabilityTolerance = 1e-12;

/// Expected fraction of true literals, (p1 + 2 p2 + 3 p3) / 3.
double beta_of(const ClauseDistribution& d);

/// Midpoint of the feasible (p1, p2) segment for a target true-literal
/// fraction: 2 p1 + p2 = 3 (1 - beta), p1, p2 >= 0, p1 + p2 <= 1.
ClauseDistribution midpoint_params(double beta);

/// The q-parameterized family: p1 = 3q / ((1+q)^3 - 1), p2 = 3q^2 / ((1+q)^3 - 1).
ClauseDistribution qhidden_params(double q);

/// "one-hidden" or "two-hidden".
ClauseDistribution preset_params(std::string_view name);

/// 1 if u < p1, 2 if u < p1 + p2, otherwise 3, for one uniform draw u.
int sample_clause_type(const ClauseDistribution& d, double u);
int sample_clause_type(const ClauseDistribution& d, Rng& rng);

}  // namespace commsat
