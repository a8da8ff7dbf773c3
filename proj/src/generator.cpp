#include "commsat/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "commsat/error.hpp"

namespace commsat {
namespace {

struct WeightedPool {
  std::vector<Var> vars;
  std::vector<std::uint64_t> weights;
  std::uint64_t total = 0;

  void add(Var v, std::uint64_t w) {
    vars.push_back(v);
    weights.push_back(w);
    total += w;
  }
};

// Equivalent to drawing uniformly from the list in which each variable is
// repeated `weight` times and redrawing on repeats.
VarTriple sample_three_distinct(const WeightedPool& pool, Rng& rng) {
  VarTriple picked{};
  std::array<std::size_t, 3> taken{};
  std::uint64_t remaining = pool.total;
  for (std::size_t k = 0; k < 3; ++k) {
    std::uint64_t target = rng.below(remaining);
    std::size_t i = 0;
    for (;; ++i) {
      if (std::find(taken.begin(), taken.begin() + k, i) != taken.begin() + k) continue;
      if (target < pool.weights[i]) break;
      target -= pool.weights[i];
    }
    taken[k] = i;
    picked[k] = pool.vars[i];
    remaining -= pool.weights[i];
  }
  return picked;
}

bool share_community(const CommunityPartition& part, const VarTriple& t) {
  for (Community k : part.v_to_cs[t[0]])
    if (part.v_to_cs[t[1]].contains(k) && part.v_to_cs[t[2]].contains(k)) return true;
  return false;
}

}  // namespace

std::size_t GeneratorParams::m() const { return static_cast<std::size_t>(std::llround(r * double(n))); }

void GeneratorParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::InvalidParameters, fmt::format("p = {} outside [0, 1]", p));
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(ErrorKind::InvalidParameters, fmt::format("alpha = {} outside [0, 1]", alpha));
  if (n < 3) fail(ErrorKind::InvalidParameters, fmt::format("n = {} is below 3", n));
  if (c < 1) fail(ErrorKind::InvalidParameters, "c must be at least 1");
  if (n < c) fail(ErrorKind::InvalidParameters, fmt::format("n = {} is smaller than c = {}", n, c));
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::InvalidParameters, fmt::format("r = {} must be positive", r));
  if (m() < 1) fail(ErrorKind::InvalidParameters, fmt::format("round(r * n) = round({} * {}) is 0", r, n));
  if (p < 1.0 && c < 3)
    fail(ErrorKind::InvalidParameters, fmt::format("SelectThree requires c >= 3 when p < 1 (c = {}, p = {})", c, p));
  if (p > 0.0 && c == 1 && n < 3) fail(ErrorKind::InvalidParameters, "the single community has fewer than 3 variables");
  dist.validate();
  if (solution && solution->size() != n)
    fail(ErrorKind::InvalidParameters, fmt::format("planted solution covers {} variables, n = {}", solution->size(), n));
}

VarTriple select_one(const CommunityPartition& part, Rng& rng) {
  const Community c = part.c();
  if (c == 0) fail(ErrorKind::InvalidParameters, "partition has no communities");
  bool any_large = false;
  for (Community k = 1; k <= c && !any_large; ++k) any_large = part.c_to_vs[k].size() >= 3;
  if (!any_large) fail(ErrorKind::CommunityTooSmall, "no community holds 3 distinct variables");

  for (std::size_t attempt = 0; attempt < kMaxCommunityRedraws; ++attempt) {
    const Community target = static_cast<Community>(1 + rng.below(c));
    const auto& members = part.c_to_vs[target];
    if (members.size() < 3) continue;
    WeightedPool pool;
    for (Var v : members) pool.add(v, part.is_intra(v) ? 2 : 1);
    return sample_three_distinct(pool, rng);
  }
  fail(ErrorKind::CommunityTooSmall,
       fmt::format("{} community draws all had fewer than 3 variables", kMaxCommunityRedraws));
}

VarTriple select_three(const CommunityPartition& part, Rng& rng) {
  const Community c = part.c();
  if (c < 3) fail(ErrorKind::InvalidParameters, fmt::format("SelectThree requires c >= 3, got c = {}", c));

  for (std::size_t redraw = 0; redraw < kMaxCommunityRedraws; ++redraw) {
    std::array<Community, 3> targets{};
    for (std::size_t k = 0; k < 3; ++k) {
      Community pick;
      do {
        pick = static_cast<Community>(1 + rng.below(c));
      } while (std::find(targets.begin(), targets.begin() + k, pick) != targets.begin() + k);
      targets[k] = pick;
    }

    // A variable shared by two targets collects weight from each of them.
    std::map<Var, std::uint64_t> weight;
    for (Community k : targets)
      for (Var v : part.c_to_vs[k]) weight[v] += part.is_intra(v) ? 2 : 1;
    if (weight.size() < 3) continue;
    WeightedPool pool;
    for (const auto& [v, w] : weight) pool.add(v, w);

    for (std::size_t attempt = 0; attempt < kMaxSelectionResamples; ++attempt) {
      const VarTriple t = sample_three_distinct(pool, rng);
      if (!share_community(part, t)) return t;
    }
  }
  fail(ErrorKind::InfeasibleSelection,
       fmt::format("no cross-community triple found after {} community draws", kMaxCommunityRedraws));
}

Clause set_polarity(const Assignment& s, const VarTriple& vars, int num, Rng& rng) {
  if (num < 1 || num > 3) fail(ErrorKind::InvalidParameters, fmt::format("num = {} outside 1..3", num));
  std::array<std::size_t, 3> slots{0, 1, 2};
  for (int i = 0; i < num; ++i) std::swap(slots[i], slots[i + rng.below(3 - i)]);
  std::array<bool, 3> makes_true{};
  for (int i = 0; i < num; ++i) makes_true[slots[i]] = true;

  std::array<Literal, 3> lits;
  for (std::size_t i = 0; i < 3; ++i) {
    const bool value = s.value(vars[i]);
    lits[i] = Literal{vars[i], makes_true[i] ? value : !value};
  }
  return Clause::three(lits[0], lits[1], lits[2]);
}

GeneratedInstance generate_formula(const GeneratorParams& params) {
  params.validate();

  Rng solution_rng(derive_seed(params.seed, 0));
  Rng partition_rng(derive_seed(params.seed, 1));
  Rng clause_rng(derive_seed(params.seed, 2));

  GeneratedInstance inst;
  inst.params = params;
  inst.master_seed = params.seed;
  inst.solution = params.solution ? *params.solution : Assignment::random(params.n, solution_rng);
  inst.partition = partition_communities(params.n, params.c, params.alpha, partition_rng);
  inst.formula.n = params.n;

  const std::size_t m = params.m();
  inst.formula.clauses.reserve(m);
  inst.provenance.reserve(m);
  std::set<Clause> seen;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t attempt = 0;; ++attempt) {
      const bool intra = clause_rng.uniform() < params.p;
      const VarTriple vars = intra ? select_one(inst.partition, clause_rng) : select_three(inst.partition, clause_rng);
      const int type = sample_clause_type(params.dist, clause_rng);
      Clause clause = set_polarity(inst.solution, vars, type, clause_rng);
      if (params.no_duplicate_clauses && !seen.insert(clause.normalized()).second) {
        if (attempt + 1 >= kMaxSelectionResamples)
          fail(ErrorKind::InfeasibleSelection, fmt::format("could not find a fresh clause for clause {}", i));
        continue;
      }
      inst.formula.clauses.push_back(std::move(clause));
      inst.provenance.push_back({intra ? SelectionMode::Intra : SelectionMode::Inter, type});
      break;
    }
  }
  return inst;
}

std::vector<GeneratedInstance> generate_batch(const GeneratorParams& params, std::size_t count,
                                              std::uint64_t master_seed, unsigned workers) {
  if (count < 1) fail(ErrorKind::InvalidParameters, "batch count must be at least 1");
  params.validate();

  std::vector<GeneratedInstance> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        GeneratorParams local = params;
        local.seed = derive_seed(master_seed, i);
        out[i] = generate_formula(local);
        out[i].master_seed = master_seed;
        out[i].index = i;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace commsat
