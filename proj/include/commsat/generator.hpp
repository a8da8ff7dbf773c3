#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "commsat/distribution.hpp"
#include "commsat/model.hpp"
#include "commsat/partition.hpp"
#include "commsat/rng.hpp"

namespace commsat {

inline constexpr std::size_t kMaxSelectionResamples = 10'000;
inline constexpr std::size_t kMaxCommunityRedraws = 100;

struct GeneratorParams {
  double p = 0.3;      ///< probability of drawing a clause from a single community
  double alpha = 1.0;  ///< share of variables that belong to one community only
  Community c = 20;
  ClauseDistribution dist = midpoint_params(0.5);
  double r = 4.5;  ///< clauses per variable
  Var n = 500;
  /// Planted solution; drawn uniformly at random from the seed when absent.
  std::optional<Assignment> solution;
  std::uint64_t seed = 0;
  /// Reject a clause whose sorted literals repeat an earlier clause.
  bool no_duplicate_clauses = false;

  /// round(r * n)
  std::size_t m() const;
  void validate() const;

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

enum class SelectionMode : std::uint8_t { Intra, Inter };

struct ClauseProvenance {
  SelectionMode mode = SelectionMode::Intra;
  int type = 1;

  friend bool operator==(const ClauseProvenance&, const ClauseProvenance&) = default;
};

struct GeneratedInstance {
  Formula formula;
  Assignment solution;
  CommunityPartition partition;
  GeneratorParams params;
  std::vector<ClauseProvenance> provenance;
  std::uint64_t master_seed = 0;
  std::size_t index = 0;
};

using VarTriple = std::array<Var, 3>;

/// Three distinct variables of one uniformly chosen community, drawn with
/// multiplicity weights (intra-community variables count twice).
VarTriple select_one(const CommunityPartition& part, Rng& rng);

/// Three distinct variables drawn from the weighted union of three distinct
/// communities, rejected while some single community contains all three.
VarTriple select_three(const CommunityPartition& part, Rng& rng);

/// Clause over `vars` in which exactly `num` literals are true under `s`.
Clause set_polarity(const Assignment& s, const VarTriple& vars, int num, Rng& rng);

GeneratedInstance generate_formula(const GeneratorParams& params);

/// `count` instances; instance i uses seed derive_seed(master_seed, i). The
/// result depends only on the arguments, not on `workers`.
std::vector<GeneratedInstance> generate_batch(const GeneratorParams& params, std::size_t count,
                                              std::uint64_t master_seed, unsigned workers = 1);

}  // namespace commsat
