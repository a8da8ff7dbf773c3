#include "commsat/distribution.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "commsat/error.hpp"

namespace commsat {

ClauseDistribution ClauseDistribution::from_p1_p2(double p1, double p2) {
  ClauseDistribution d{p1, p2, 1.0 - p1 - p2};
  if (std::abs(d.p3) < kProbabilityTolerance) d.p3 = 0.0;
  d.validate();
  return d;
}

void ClauseDistribution::validate() const {
  const bool finite = std::isfinite(p1) && std::isfinite(p2) && std::isfinite(p3);
  if (!finite || p1 < 0.0 || p2 < 0.0 || p3 < -kProbabilityTolerance)
    fail(ErrorKind::InvalidParameters,
         fmt::format("clause distribution ({}, {}, {}) has a negative component", p1, p2, p3));
  if (std::abs(p1 + p2 + p3 - 1.0) > kProbabilityTolerance)
    fail(ErrorKind::InvalidParameters, fmt::format("clause distribution ({}, {}, {}) does not sum to 1", p1, p2, p3));
}

double beta_of(const ClauseDistribution& d) { return (d.p1 + 2.0 * d.p2 + 3.0 * d.p3) / 3.0; }

ClauseDistribution midpoint_params(double beta) {
  if (!(beta >= 1.0 / 3.0 - kProbabilityTolerance && beta <= 1.0))
    fail(ErrorKind::InvalidParameters, fmt::format("beta = {} outside [1/3, 1]", beta));

  // The line 2 p1 + p2 = budget meets p2 = 0 at (budget / 2, 0) and either
  // the p2 axis at (0, budget) or the edge p1 + p2 = 1 at (budget - 1, 2 - budget).
  const double budget = std::max(0.0, 3.0 * (1.0 - beta));
  const double a1 = budget / 2.0, a2 = 0.0;
  double b1 = 0.0, b2 = budget;
  if (budget > 1.0) {
    b1 = budget - 1.0;
    b2 = 2.0 - budget;
  }
  return ClauseDistribution::from_p1_p2((a1 + b1) / 2.0, (a2 + b2) / 2.0);
}

ClauseDistribution qhidden_params(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) fail(ErrorKind::InvalidParameters, fmt::format("q = {} must be positive", q));
  const double denom = std::pow(1.0 + q, 3) - 1.0;
  return ClauseDistribution::from_p1_p2(3.0 * q / denom, 3.0 * q * q / denom);
}

ClauseDistribution preset_params(std::string_view name) {
  if (name == "one-hidden") return ClauseDistribution::from_p1_p2(3.0 / 7.0, 3.0 / 7.0);
  if (name == "two-hidden") return ClauseDistribution::from_p1_p2(0.5, 0.5);
  fail(ErrorKind::InvalidParameters, fmt::format("unknown distribution preset '{}'", std::string(name)));
}

int sample_clause_type(const ClauseDistribution& d, double u) {
  if (u < d.p1) return 1;
  if (u < d.p1 + d.p2) return 2;
  return 3;
}

int sample_clause_type(const ClauseDistribution& d, Rng& rng) { return sample_clause_type(d, rng.uniform()); }

}  // namespace commsat
