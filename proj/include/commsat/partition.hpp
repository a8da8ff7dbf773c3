#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "commsat/model.hpp"
#include "commsat/rng.hpp"

namespace commsat {

using Community = std::uint32_t;

/// Assignment of variables to (possibly overlapping) communities.
///
/// Communities are numbered 1..c and variables 1..n; index 0 of each table
/// is unused. Every variable has a `home` community; inter-community
/// variables additionally belong to exactly one other community.
struct CommunityPartition {
  std::vector<std::set<Var>> c_to_vs;
  std::vector<std::set<Community>> v_to_cs;
  std::vector<Community> home;

  Var n() const { return home.empty() ? 0 : static_cast<Var>(home.size() - 1); }
  Community c() const { return c_to_vs.empty() ? 0 : static_cast<Community>(c_to_vs.size() - 1); }

  bool is_intra(Var v) const { return v_to_cs[v].size() == 1; }
  std::size_t intra_variable_count() const;
  std::size_t inter_variable_count() const { return n() - intra_variable_count(); }

  /// Empty tables sized for n variables and c communities.
  static CommunityPartition empty(Var n, Community c);
  /// Adds v to community k in both directions.
  void add(Var v, Community k);

  friend bool operator==(const CommunityPartition&, const CommunityPartition&) = default;
};

/// Number of inter-community variables promoted out of a community with
/// `home_size` home variables: h * (1 - alpha), rounded half to even.
std::size_t promoted_count(std::size_t home_size, double alpha);

/// Distributes n variables over c communities and promotes a (1 - alpha)
/// share of each community's home variables into a second, uniformly chosen
/// community. Home sizes differ by at most one; the larger communities are
/// the lowest-indexed ones.
CommunityPartition partition_communities(Var n, Community c, double alpha, Rng& rng);

struct PartitionReport {
  bool valid = true;
  std::vector<std::string> violations;
  std::size_t intra = 0;
  std::size_t inter = 0;
  double expected_intra = 0.0;
  double expected_inter = 0.0;

  bool has(const std::string& violation) const;
};

PartitionReport validate_partition(const CommunityPartition& part, Var n, Community c, double alpha);

}  // namespace commsat
