#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "commsat/analysis.hpp"
#include "commsat/error.hpp"
#include "commsat/generator.hpp"

using namespace commsat;

namespace {

CommunityPartition manual_partition(Var n, const std::vector<std::vector<Var>>& communities) {
  auto part = CommunityPartition::empty(n, Community(communities.size()));
  for (std::size_t k = 0; k < communities.size(); ++k)
    for (Var v : communities[k]) {
      if (part.home[v] == 0) part.home[v] = Community(k + 1);
      part.add(v, Community(k + 1));
    }
  return part;
}

using Triple = std::array<Var, 3>;

Triple sorted(VarTriple t) {
  std::sort(t.begin(), t.end());
  return t;
}

// List-based selection: materialize the list with
// intra variables twice and inter variables once, then draw positions
// uniformly until three different variables have been seen.
Triple reference_select_one(const CommunityPartition& part, Rng& rng) {
  const Community target = Community(1 + rng.below(part.c()));
  std::vector<Var> list;
  for (Var v : part.c_to_vs[target]) {
    list.push_back(v);
    if (part.is_intra(v)) list.push_back(v);
  }
  std::vector<Var> picked;
  while (picked.size() < 3) {
    const Var v = list[rng.below(list.size())];
    if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
  }
  return sorted({picked[0], picked[1], picked[2]});
}

std::set<Community> common_communities(const CommunityPartition& part, const Clause& clause) {
  std::set<Community> common = part.v_to_cs[clause[0].var];
  for (const Literal& l : clause) {
    std::set<Community> keep;
    for (Community k : common)
      if (part.v_to_cs[l.var].contains(k)) keep.insert(k);
    common = keep;
  }
  return common;
}

// Uniform random 3-SAT control at the same size: variables drawn without
// replacement from all n, random polarities.
Formula uniform_random_3sat(Var n, std::size_t m, Rng& rng) {
  Formula f{n, {}};
  for (std::size_t i = 0; i < m; ++i) {
    Var a = Var(1 + rng.below(n)), b, c;
    do b = Var(1 + rng.below(n)); while (b == a);
    do c = Var(1 + rng.below(n)); while (c == a || c == b);
    f.clauses.push_back(Clause::three({a, rng.coin()}, {b, rng.coin()}, {c, rng.coin()}));
  }
  return f;
}

}  // namespace

TEST_CASE("select_one stays inside one community") {
  const auto part = manual_partition(10, {{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}});
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto t = sorted(select_one(part, rng));
    const bool first = t[2] <= 5, second = t[0] >= 6;
    CHECK((first || second));
    CHECK(t[0] != t[1]);
    CHECK(t[1] != t[2]);
  }
}

TEST_CASE("select_one is uniform over 3-subsets when all weights are equal") {
  const auto part = manual_partition(5, {{1, 2, 3, 4, 5}});
  Rng rng(11);
  std::map<Triple, int> freq;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) ++freq[sorted(select_one(part, rng))];
  CHECK(freq.size() == 10);
  for (const auto& [t, count] : freq) CHECK(std::abs(double(count) / draws - 0.1) <= 0.01);
}

TEST_CASE("select_one matches the list-based reference with mixed weights") {
  // v5 and v6 are inter-community variables (weight 1 in each community).
  const auto part = manual_partition(9, {{1, 2, 3, 4, 5, 6}, {5, 6, 7, 8, 9}});
  Rng impl_rng(3), ref_rng(4);
  const int draws = 100'000;
  std::map<Triple, double> impl, ref;
  for (int i = 0; i < draws; ++i) {
    impl[sorted(select_one(part, impl_rng))] += 1.0 / draws;
    ref[reference_select_one(part, ref_rng)] += 1.0 / draws;
  }
  std::set<Triple> keys;
  for (const auto& [t, f] : impl) keys.insert(t);
  for (const auto& [t, f] : ref) keys.insert(t);
  for (const auto& t : keys) CHECK(std::abs(impl[t] - ref[t]) <= 0.01);
}

TEST_CASE("select_one on a three-variable community") {
  const auto part = manual_partition(3, {{1, 2, 3}});
  Rng rng(5);
  for (int i = 0; i < 100; ++i) CHECK(sorted(select_one(part, rng)) == Triple{1, 2, 3});
}

TEST_CASE("select_one with no community large enough") {
  const auto part = manual_partition(4, {{1, 2}, {3, 4}});
  Rng rng(6);
  try {
    select_one(part, rng);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CommunityTooSmall);
  }
}

TEST_CASE("select_three never returns a single-community triple") {
  const auto part = manual_partition(6, {{1, 2}, {3, 4}, {5, 6}});
  Rng rng(7);
  for (int i = 0; i < 10'000; ++i) {
    const auto t = select_three(part, rng);
    const std::set<Community> homes{part.home[t[0]], part.home[t[1]], part.home[t[2]]};
    CHECK(homes.size() >= 2);
  }
}

TEST_CASE("select_three applies the predicate to overlapping communities") {
  Rng prng(8);
  const auto part = partition_communities(60, 5, 0.3, prng);
  Rng rng(9);
  for (int i = 0; i < 5000; ++i) {
    const VarTriple t = select_three(part, rng);
    bool inside_one = false;
    for (Community k = 1; k <= part.c(); ++k)
      inside_one = inside_one || (part.c_to_vs[k].contains(t[0]) && part.c_to_vs[k].contains(t[1]) &&
                                  part.c_to_vs[k].contains(t[2]));
    CHECK_FALSE(inside_one);
  }
}

TEST_CASE("select_three needs three communities") {
  const auto part = manual_partition(6, {{1, 2, 3}, {4, 5, 6}});
  Rng rng(10);
  try {
    select_three(part, rng);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameters);
  }
}

TEST_CASE("select_three reports infeasible partitions") {
  // Every variable belongs to all of communities 1..3 through overlap, so no
  // triple can avoid a shared community.
  auto part = CommunityPartition::empty(3, 3);
  for (Var v = 1; v <= 3; ++v) {
    part.home[v] = 1;
    for (Community k = 1; k <= 3; ++k) part.add(v, k);
  }
  Rng rng(12);
  try {
    select_three(part, rng);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleSelection);
  }
}

TEST_CASE("set_polarity examples") {
  const Assignment all_true(3, true);
  Rng rng(13);
  CHECK(set_polarity(all_true, {1, 2, 3}, 3, rng) == Clause{{1, true}, {2, true}, {3, true}});

  // num = 1: the chosen variable keeps its true polarity, the rest are negated.
  bool saw_v1 = false;
  for (int i = 0; i < 50; ++i) {
    const Clause c = set_polarity(all_true, {1, 2, 3}, 1, rng);
    if (c[0].positive) {
      saw_v1 = true;
      CHECK(c == Clause{{1, true}, {2, false}, {3, false}});
    }
  }
  CHECK(saw_v1);

  Assignment mixed(3, true);
  mixed.set(1, false);
  bool saw_mixed = false;
  for (int i = 0; i < 50; ++i) {
    const Clause c = set_polarity(mixed, {1, 2, 3}, 1, rng);
    CHECK(clause_type(c, mixed) == 1);
    if (mixed.satisfies(c[0])) {
      saw_mixed = true;
      CHECK(c == Clause{{1, false}, {2, false}, {3, false}});
    }
  }
  CHECK(saw_mixed);

  CHECK_THROWS_AS(set_polarity(all_true, {1, 2, 3}, 0, rng), Error);
  CHECK_THROWS_AS(set_polarity(all_true, {1, 2, 3}, 4, rng), Error);
}

TEST_CASE("set_polarity yields exactly num true literals, chosen uniformly") {
  Rng rng(14);
  std::array<std::array<int, 3>, 4> true_at{};
  const int draws = 30'000;
  for (int i = 0; i < draws; ++i) {
    const Assignment s = Assignment::random(6, rng);
    const int num = 1 + int(i % 3);
    const Clause c = set_polarity(s, {2, 4, 6}, num, rng);
    REQUIRE(clause_type(c, s) == num);
    for (int k = 0; k < 3; ++k) true_at[num][k] += s.satisfies(c[k]) ? 1 : 0;
  }
  // Each position is true with probability num / 3.
  for (int num = 1; num <= 2; ++num)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(double(true_at[num][k]) / (draws / 3) - num / 3.0) <= 0.02);
}

TEST_CASE("default instance") {
  GeneratorParams params;
  params.seed = 17;
  const auto inst = generate_formula(params);
  CHECK(inst.formula.n == 500);
  CHECK(inst.formula.m() == 2250);
  CHECK(inst.formula.is_three_sat());
  CHECK(evaluate(inst.formula, inst.solution).satisfied);
  CHECK(inst.provenance.size() == 2250);
  for (std::size_t i = 0; i < inst.formula.m(); ++i) {
    CHECK(clause_type(inst.formula.clauses[i], inst.solution) == inst.provenance[i].type);
    if (inst.provenance[i].mode == SelectionMode::Intra)
      CHECK_FALSE(common_communities(inst.partition, inst.formula.clauses[i]).empty());
  }
}

TEST_CASE("p = 1 and p = 0 extremes") {
  GeneratorParams params;
  params.n = 200;
  params.seed = 3;
  params.p = 1.0;
  auto inst = generate_formula(params);
  for (const auto& c : inst.formula.clauses) CHECK_FALSE(common_communities(inst.partition, c).empty());

  params.p = 0.0;
  inst = generate_formula(params);
  for (const auto& c : inst.formula.clauses) CHECK(common_communities(inst.partition, c).empty());
}

TEST_CASE("generation is a pure function of the parameters") {
  GeneratorParams params;
  params.n = 120;
  params.alpha = 0.6;
  params.seed = 99;
  const auto a = generate_formula(params), b = generate_formula(params);
  CHECK(a.formula == b.formula);
  CHECK(a.solution == b.solution);
  CHECK(a.partition == b.partition);
  params.seed = 100;
  CHECK_FALSE(generate_formula(params).formula == a.formula);
}

TEST_CASE("a supplied planted solution is used as given") {
  GeneratorParams params;
  params.n = 60;
  params.c = 5;
  params.solution = Assignment(60, false);
  const auto inst = generate_formula(params);
  CHECK(inst.solution == Assignment(60, false));
  CHECK(evaluate(inst.formula, inst.solution).satisfied);
  params.solution = Assignment(59, false);
  CHECK_THROWS_AS(generate_formula(params), Error);
}

TEST_CASE("parameter validation") {
  auto kind_of = [](GeneratorParams params) {
    try {
      generate_formula(params);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  GeneratorParams params;
  params.c = 2;
  params.p = 0.5;
  CHECK(kind_of(params) == ErrorKind::InvalidParameters);
  params = {};
  params.r = 0.0001;
  params.n = 100;
  CHECK(kind_of(params) == ErrorKind::InvalidParameters);
  params = {};
  params.n = 4;
  params.c = 2;
  params.p = 1.0;
  CHECK(kind_of(params) == ErrorKind::CommunityTooSmall);
  params = {};
  params.p = 1.2;
  CHECK(kind_of(params) == ErrorKind::InvalidParameters);
  params = {};
  params.n = 10;
  CHECK(kind_of(params) == ErrorKind::InvalidParameters);  // n < c
}

TEST_CASE("duplicate rejection is opt-in") {
  GeneratorParams params;
  params.n = 12;
  params.c = 3;
  params.r = 6.0;
  params.p = 0.9;
  params.seed = 1;
  auto count_dups = [](const Formula& f) {
    std::set<Clause> seen;
    std::size_t dups = 0;
    for (const auto& c : f.clauses) dups += seen.insert(c.normalized()).second ? 0 : 1;
    return dups;
  };
  CHECK(count_dups(generate_formula(params).formula) > 0);
  params.no_duplicate_clauses = true;
  const auto inst = generate_formula(params);
  CHECK(count_dups(inst.formula) == 0);
  CHECK(inst.formula.m() == 72);
  CHECK(evaluate(inst.formula, inst.solution).satisfied);
}

TEST_CASE("batch determinism and independence from worker count") {
  GeneratorParams params;
  params.n = 100;
  params.c = 10;
  const auto a = generate_batch(params, 6, 1234, 1);
  const auto b = generate_batch(params, 6, 1234, 3);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].formula == b[i].formula);
    CHECK(a[i].solution == b[i].solution);
    CHECK(a[i].index == i);
    CHECK(a[i].master_seed == 1234);
    CHECK(a[i].params.seed == derive_seed(1234, i));
  }
  CHECK_FALSE(a[0].formula == a[1].formula);
  CHECK_FALSE(a[0].solution == a[1].solution);
  CHECK_THROWS_AS(generate_batch(params, 0, 1), Error);
}

TEST_CASE("defaults over 50 instances: satisfiable, types and intra-clause count") {
  const auto batch = generate_batch(GeneratorParams{}, 50, 2718);
  std::array<double, 4> types{};
  double intra = 0, total = 0;
  for (const auto& inst : batch) {
    CHECK(evaluate(inst.formula, inst.solution).satisfied);
    const auto st = instance_stats(inst);
    CHECK(st.type0 == 0);
    for (int t = 0; t < 3; ++t) types[t + 1] += double(st.type_counts[t]);
    intra += double(st.intra_clause_count);
    total += double(st.m);
    CHECK(double(st.intra_clause_count) / double(st.m) >= 0.3 - 0.05);
  }
  CHECK(std::abs(types[1] / total - 0.625) <= 0.02);
  CHECK(std::abs(types[2] / total - 0.25) <= 0.02);
  CHECK(std::abs(types[3] / total - 0.125) <= 0.02);
  CHECK(std::abs(intra / 50 - 675.0) <= 0.03 * 675.0);
  // At alpha = 1 the inter branch cannot produce intra clauses.
  CHECK(intra / total >= 0.3 - 0.01);
}

TEST_CASE("degree balance against uniform random 3-SAT") {
  double cv_gen = 0, cv_uniform = 0;
  const auto batch = generate_batch(GeneratorParams{}, 50, 31);
  Rng rng(32);
  for (const auto& inst : batch) {
    cv_gen += degree_mean_cv(build_vig(inst.formula)).second;
    cv_uniform += degree_mean_cv(build_vig(uniform_random_3sat(500, 2250, rng))).second;
  }
  CHECK(cv_gen <= 1.25 * cv_uniform);
}
