#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "commsat/generator.hpp"
#include "commsat/model.hpp"
#include "commsat/partition.hpp"

namespace commsat {

/// Variable incidence graph. Every clause adds 1/3 to the edge of each pair
/// of its variables; weights are kept as integer multiples of 1/3 so totals
/// stay exact.
class WeightedGraph {
 public:
  explicit WeightedGraph(Var n = 0) : n_(n) {}

  Var node_count() const { return n_; }
  std::size_t edge_count() const { return thirds_.size(); }

  void add_third(Var x, Var y, std::uint32_t count = 1);
  double weight(Var x, Var y) const;
  double total_weight() const { return double(total_thirds_) / 3.0; }
  std::uint64_t total_thirds() const { return total_thirds_; }
  /// Weighted degree of every node, indexed 1..n (index 0 unused).
  std::vector<double> degrees() const;

  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (const auto& [key, thirds] : thirds_)
      fn(static_cast<Var>(key >> 32), static_cast<Var>(key & 0xffffffffu), double(thirds) / 3.0);
  }

 private:
  static std::uint64_t key(Var x, Var y);

  Var n_;
  std::unordered_map<std::uint64_t, std::uint64_t> thirds_;
  std::uint64_t total_thirds_ = 0;
};

WeightedGraph build_vig(const Formula& f);

/// Newman modularity of a disjoint partition of the VIG, with weighted
/// degrees. `community_of` is indexed by variable; 0 means unassigned.
/// Returns 0 for a graph without edges.
double modularity(const WeightedGraph& g, const std::vector<Community>& community_of);

struct InstanceStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t type0 = 0;
  std::array<std::size_t, 3> type_counts{};  ///< clauses of type 1, 2, 3
  std::size_t intra_clause_count = 0;
  std::size_t intra_variable_count = 0;
  double empirical_beta = 0.0;
  double modularity_q = 0.0;
  double degree_mean = 0.0;
  double degree_cv = 0.0;
};

/// True when the clause's variables share at least one community.
bool is_intra_clause(const Clause& clause, const CommunityPartition& part);

/// Statistics of a formula measured against a planted solution and the partition
/// it was generated from. Modularity places each variable in its home community.
InstanceStats compute_stats(const Formula& f, const Assignment& solution, const CommunityPartition& part);
InstanceStats instance_stats(const GeneratedInstance& inst);

/// Coefficient of variation of weighted VIG degrees over variables 1..n.
std::pair<double, double> degree_mean_cv(const WeightedGraph& g);

}  // namespace commsat
