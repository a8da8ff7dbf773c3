#include "commsat/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "commsat/error.hpp"

namespace commsat {

std::uint64_t WeightedGraph::key(Var x, Var y) {
  if (x > y) std::swap(x, y);
  return (std::uint64_t(x) << 32) | y;
}

void WeightedGraph::add_third(Var x, Var y, std::uint32_t count) {
  if (x == y) return;
  thirds_[key(x, y)] += count;
  total_thirds_ += count;
}

double WeightedGraph::weight(Var x, Var y) const {
  const auto it = thirds_.find(key(x, y));
  return it == thirds_.end() ? 0.0 : double(it->second) / 3.0;
}

std::vector<double> WeightedGraph::degrees() const {
  std::vector<double> deg(std::size_t(n_) + 1, 0.0);
  for_each_edge([&](Var x, Var y, double w) {
    deg[x] += w;
    deg[y] += w;
  });
  return deg;
}

WeightedGraph build_vig(const Formula& f) {
  WeightedGraph g(f.n);
  for (const Clause& clause : f.clauses)
    for (std::size_t i = 0; i < clause.size(); ++i)
      for (std::size_t j = i + 1; j < clause.size(); ++j) g.add_third(clause[i].var, clause[j].var);
  return g;
}

double modularity(const WeightedGraph& g, const std::vector<Community>& community_of) {
  if (g.total_thirds() == 0) return 0.0;
  Community max_c = 0;
  for (Community k : community_of) max_c = std::max(max_c, k);
  std::vector<double> internal(std::size_t(max_c) + 1, 0.0), degree(std::size_t(max_c) + 1, 0.0);

  auto lookup = [&](Var v) {
    if (v >= community_of.size() || community_of[v] == 0)
      fail(ErrorKind::Domain, fmt::format("variable {} has edges but no community", v));
    return community_of[v];
  };
  g.for_each_edge([&](Var x, Var y, double w) {
    const Community cx = lookup(x), cy = lookup(y);
    if (cx == cy) internal[cx] += w;
    degree[cx] += w;
    degree[cy] += w;
  });

  const double total = g.total_weight();
  double q = 0.0;
  for (Community k = 1; k <= max_c; ++k) {
    const double share = degree[k] / (2.0 * total);
    q += internal[k] / total - share * share;
  }
  return q;
}

bool is_intra_clause(const Clause& clause, const CommunityPartition& part) {
  if (clause.size() == 0) return false;
  for (Community k : part.v_to_cs.at(clause[0].var)) {
    bool all = true;
    for (const Literal& lit : clause) all = all && part.v_to_cs.at(lit.var).contains(k);
    if (all) return true;
  }
  return false;
}

std::pair<double, double> degree_mean_cv(const WeightedGraph& g) {
  const auto deg = g.degrees();
  const std::size_t n = g.node_count();
  if (n == 0) return {0.0, 0.0};
  double sum = 0.0;
  for (std::size_t v = 1; v <= n; ++v) sum += deg[v];
  const double mean = sum / double(n);
  double var = 0.0;
  for (std::size_t v = 1; v <= n; ++v) var += (deg[v] - mean) * (deg[v] - mean);
  var /= double(n);
  return {mean, mean > 0.0 ? std::sqrt(var) / mean : 0.0};
}

InstanceStats compute_stats(const Formula& f, const Assignment& solution, const CommunityPartition& part) {
  if (part.n() != f.n)
    fail(ErrorKind::Domain, fmt::format("partition covers {} variables, formula has {}", part.n(), f.n));
  InstanceStats st;
  st.n = f.n;
  st.m = f.m();
  std::size_t true_literals = 0, literals = 0;
  for (const Clause& clause : f.clauses) {
    const int t = clause_type(clause, solution);
    if (t == 0)
      ++st.type0;
    else
      ++st.type_counts[std::min(t, 3) - 1];
    true_literals += std::size_t(t);
    literals += clause.size();
    if (is_intra_clause(clause, part)) ++st.intra_clause_count;
  }
  st.empirical_beta = literals ? double(true_literals) / double(literals) : 0.0;
  st.intra_variable_count = part.intra_variable_count();

  const WeightedGraph g = build_vig(f);
  st.modularity_q = modularity(g, part.home);
  std::tie(st.degree_mean, st.degree_cv) = degree_mean_cv(g);
  return st;
}

InstanceStats instance_stats(const GeneratedInstance& inst) {
  return compute_stats(inst.formula, inst.solution, inst.partition);
}

}  // namespace commsat
