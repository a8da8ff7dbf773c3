#include "commsat/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include <fmt/format.h>

#include "commsat/error.hpp"
#include "commsat/rng.hpp"

namespace commsat {

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::LimitReached: return "LIMIT";
  }
  return "UNKNOWN";
}

namespace {

using Clock = std::chrono::steady_clock;

// Literal codes: 2 * var for positive, 2 * var + 1 for negative.
using Lit = std::uint32_t;
inline Lit encode(Literal l) { return 2 * l.var + (l.positive ? 0 : 1); }
inline Lit negate(Lit l) { return l ^ 1u; }
inline Var var_of(Lit l) { return l >> 1; }

struct CleanFormula {
  Var n = 0;
  std::vector<std::vector<Lit>> clauses;
  bool has_empty = false;
};

// Drops duplicate literals and tautologies; records whether an empty clause exists.
CleanFormula clean(const Formula& f) {
  f.validate();
  CleanFormula out;
  out.n = f.n;
  for (const Clause& clause : f.clauses) {
    std::vector<Lit> lits;
    for (const Literal& l : clause) lits.push_back(encode(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    bool tautology = false;
    for (std::size_t i = 1; i < lits.size(); ++i) tautology = tautology || lits[i] == negate(lits[i - 1]);
    if (tautology) continue;
    if (lits.empty()) out.has_empty = true;
    out.clauses.push_back(std::move(lits));
  }
  return out;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Assignment verified_model(const Formula& f, const std::vector<std::int8_t>& value) {
  Assignment a(f.n, false);
  for (Var v = 1; v <= f.n; ++v) a.set(v, value[v] == 1);
  if (!evaluate(f, a)) fail(ErrorKind::Domain, "solver produced a model that does not satisfy the formula");
  return a;
}

class Dpll {
 public:
  explicit Dpll(const Formula& f) : formula_(f), cnf_(clean(f)) {
    const std::size_t lits = 2 * (std::size_t(cnf_.n) + 1);
    occ_.resize(lits);
    active_.assign(lits, 0);
    value_.assign(std::size_t(cnf_.n) + 1, -1);
    queued_.assign(std::size_t(cnf_.n) + 1, 0);
    sat_count_.assign(cnf_.clauses.size(), 0);
    free_count_.assign(cnf_.clauses.size(), 0);
    for (std::size_t c = 0; c < cnf_.clauses.size(); ++c) {
      free_count_[c] = static_cast<std::uint32_t>(cnf_.clauses[c].size());
      for (Lit l : cnf_.clauses[c]) {
        occ_[l].push_back(static_cast<std::uint32_t>(c));
        ++active_[l];
      }
      if (cnf_.clauses[c].size() == 1) units_.push_back(cnf_.clauses[c][0]);
    }
    for (Var v = 1; v <= cnf_.n; ++v) mark_candidate(v);
  }

  SolveOutcome run(const DpllLimits& limits) {
    const auto start = Clock::now();
    SolveOutcome out;
    auto finish = [&](SolveStatus status) {
      out.status = status;
      out.stats.elapsed_seconds = seconds_since(start);
      if (status == SolveStatus::Sat) out.model = verified_model(formula_, model_values());
      return out;
    };
    if (cnf_.has_empty) return finish(SolveStatus::Unsat);

    struct Frame {
      std::size_t trail_size;
      Lit decision;
      bool flipped;
    };
    std::vector<Frame> frames;

    for (;;) {
      if (!propagate(out.stats)) {
        ++out.stats.conflicts;
        while (!frames.empty() && frames.back().flipped) {
          undo_to(frames.back().trail_size);
          frames.pop_back();
        }
        if (frames.empty()) return finish(SolveStatus::Unsat);
        Frame& top = frames.back();
        undo_to(top.trail_size);
        top.flipped = true;
        units_.push_back(negate(top.decision));
        continue;
      }
      if (satisfied_ == cnf_.clauses.size()) return finish(SolveStatus::Sat);

      if (out.stats.decisions >= limits.max_decisions) return finish(SolveStatus::LimitReached);
      if (limits.max_seconds > 0.0 && (out.stats.decisions & 255) == 0 && seconds_since(start) > limits.max_seconds)
        return finish(SolveStatus::LimitReached);

      Var v = 1;
      while (v < cnf_.n && (value_[v] != -1 || active_[2 * v] + active_[2 * v + 1] == 0)) ++v;
      ++out.stats.decisions;
      frames.push_back({trail_.size(), 2 * v, false});
      units_.push_back(2 * v);
    }
  }

 private:
  bool is_true(Lit l) const { return value_[var_of(l)] == std::int8_t((l & 1) == 0); }

  void mark_candidate(Var v) {
    if (!queued_[v]) {
      queued_[v] = 1;
      candidates_.push_back(v);
    }
  }

  // Returns false on conflict. Counters are always fully updated so that
  // undo() is the exact inverse.
  bool assign(Lit l) {
    value_[var_of(l)] = (l & 1) ? 0 : 1;
    trail_.push_back(l);
    for (std::uint32_t c : occ_[l]) {
      if (sat_count_[c]++ == 0) {
        ++satisfied_;
        for (Lit x : cnf_.clauses[c])
          if (--active_[x] == 0) mark_candidate(var_of(x));
      }
    }
    bool ok = true;
    for (std::uint32_t c : occ_[negate(l)]) {
      const std::uint32_t free = --free_count_[c];
      if (sat_count_[c] != 0) continue;
      if (free == 0) {
        ok = false;
      } else if (free == 1) {
        for (Lit x : cnf_.clauses[c])
          if (value_[var_of(x)] == -1) {
            units_.push_back(x);
            break;
          }
      }
    }
    return ok;
  }

  void undo(Lit l) {
    for (std::uint32_t c : occ_[negate(l)]) ++free_count_[c];
    for (std::uint32_t c : occ_[l]) {
      if (--sat_count_[c] == 0) {
        --satisfied_;
        for (Lit x : cnf_.clauses[c]) ++active_[x];
      }
    }
    value_[var_of(l)] = -1;
    mark_candidate(var_of(l));
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      undo(trail_.back());
      trail_.pop_back();
    }
    units_.clear();
  }

  bool propagate(SolveStats& stats) {
    for (;;) {
      while (!units_.empty()) {
        const Lit l = units_.back();
        units_.pop_back();
        const Var v = var_of(l);
        if (value_[v] != -1) {
          if (!is_true(l)) {
            units_.clear();
            return false;
          }
          continue;
        }
        ++stats.propagations;
        if (!assign(l)) {
          units_.clear();
          return false;
        }
      }
      while (units_.empty() && !candidates_.empty()) {
        const Var v = candidates_.back();
        candidates_.pop_back();
        queued_[v] = 0;
        if (value_[v] != -1) continue;
        const std::uint32_t pos = active_[2 * v], neg = active_[2 * v + 1];
        if (pos > 0 && neg == 0) units_.push_back(2 * v);
        if (neg > 0 && pos == 0) units_.push_back(2 * v + 1);
      }
      if (units_.empty()) return true;
    }
  }

  std::vector<std::int8_t> model_values() const {
    std::vector<std::int8_t> v(value_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = value_[i] == 1 ? 1 : 0;
    return v;
  }

  const Formula& formula_;
  CleanFormula cnf_;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<std::uint32_t> active_;  // unsatisfied clauses containing each literal
  std::vector<std::int8_t> value_;     // -1 unassigned, 0 false, 1 true
  std::vector<std::uint8_t> queued_;
  std::vector<std::uint32_t> sat_count_;
  std::vector<std::uint32_t> free_count_;
  std::vector<Lit> trail_;
  std::vector<Lit> units_;
  std::vector<Var> candidates_;
  std::size_t satisfied_ = 0;
};

}  // namespace

SolveOutcome dpll_solve(const Formula& f, const DpllLimits& limits) { return Dpll(f).run(limits); }

SolveOutcome walksat_probe(const Formula& f, const WalkSatOptions& options) {
  if (!(options.noise >= 0.0 && options.noise <= 1.0))
    fail(ErrorKind::InvalidParameters, fmt::format("noise = {} outside [0, 1]", options.noise));
  const auto start = Clock::now();
  const CleanFormula cnf = clean(f);
  SolveOutcome out;
  auto finish = [&](SolveStatus status, const std::vector<std::int8_t>* value) {
    out.status = status;
    out.stats.elapsed_seconds = seconds_since(start);
    if (value) out.model = verified_model(f, *value);
    return out;
  };
  if (cnf.has_empty) return finish(SolveStatus::LimitReached, nullptr);

  Rng rng(options.seed);
  const std::size_t nclauses = cnf.clauses.size();
  std::vector<std::vector<std::uint32_t>> occ(2 * (std::size_t(cnf.n) + 1));
  for (std::size_t c = 0; c < nclauses; ++c)
    for (Lit l : cnf.clauses[c]) occ[l].push_back(static_cast<std::uint32_t>(c));

  std::vector<std::int8_t> value(std::size_t(cnf.n) + 1, 0);
  for (Var v = 1; v <= cnf.n; ++v) value[v] = rng.coin() ? 1 : 0;
  auto lit_true = [&](Lit l) { return value[var_of(l)] == std::int8_t((l & 1) == 0); };

  std::vector<std::uint32_t> num_true(nclauses, 0);
  std::vector<std::uint32_t> falsified;
  std::vector<std::size_t> where(nclauses, SIZE_MAX);
  auto make_false = [&](std::uint32_t c) {
    where[c] = falsified.size();
    falsified.push_back(c);
  };
  auto make_true = [&](std::uint32_t c) {
    const std::uint32_t last = falsified.back();
    falsified[where[c]] = last;
    where[last] = where[c];
    falsified.pop_back();
    where[c] = SIZE_MAX;
  };
  for (std::uint32_t c = 0; c < nclauses; ++c) {
    for (Lit l : cnf.clauses[c]) num_true[c] += lit_true(l) ? 1 : 0;
    if (num_true[c] == 0) make_false(c);
  }

  auto break_count = [&](Var v) {
    const Lit now_true = value[v] ? 2 * v : 2 * v + 1;
    std::uint32_t count = 0;
    for (std::uint32_t c : occ[now_true]) count += num_true[c] == 1 ? 1 : 0;
    return count;
  };

  while (!falsified.empty()) {
    if (out.stats.flips >= options.max_flips) return finish(SolveStatus::LimitReached, nullptr);
    if (options.max_seconds > 0.0 && (out.stats.flips & 4095) == 0 && seconds_since(start) > options.max_seconds)
      return finish(SolveStatus::LimitReached, nullptr);

    const auto& clause = cnf.clauses[falsified[rng.below(falsified.size())]];
    Var pick = 0;
    std::uint32_t best = UINT32_MAX;
    for (Lit l : clause) {
      const Var v = var_of(l);
      const std::uint32_t b = break_count(v);
      if (b < best || (b == best && v < pick)) {
        best = b;
        pick = v;
      }
    }
    // A flip that breaks nothing is always taken; otherwise noise decides.
    if (best > 0 && rng.uniform() < options.noise) pick = var_of(clause[rng.below(clause.size())]);

    const Lit was_true = value[pick] ? 2 * pick : 2 * pick + 1;
    value[pick] ^= 1;
    for (std::uint32_t c : occ[was_true])
      if (--num_true[c] == 0) make_false(c);
    for (std::uint32_t c : occ[negate(was_true)])
      if (num_true[c]++ == 0) make_true(c);
    ++out.stats.flips;
  }
  return finish(SolveStatus::Sat, &value);
}

namespace {

template <typename Fn>
void enumerate_models(const Formula& f, Fn&& fn) {
  if (f.n > kBruteForceMaxVars)
    fail(ErrorKind::TooLarge, fmt::format("brute force enumeration limited to {} variables, got {}", kBruteForceMaxVars, f.n));
  f.validate();
  struct Masks {
    std::uint32_t pos = 0, neg = 0;
  };
  std::vector<Masks> clauses;
  for (const Clause& clause : f.clauses) {
    Masks mk;
    for (const Literal& l : clause) (l.positive ? mk.pos : mk.neg) |= 1u << (l.var - 1);
    clauses.push_back(mk);
  }
  const std::uint64_t total = std::uint64_t{1} << f.n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const auto mask = static_cast<std::uint32_t>(bits);
    const bool ok = std::all_of(clauses.begin(), clauses.end(),
                                [&](const Masks& mk) { return (mask & mk.pos) != 0 || (~mask & mk.neg) != 0; });
    if (ok) fn(mask);
  }
}

}  // namespace

void for_each_model(const Formula& f, const std::function<void(const Assignment&)>& visit) {
  enumerate_models(f, [&](std::uint32_t mask) {
    Assignment a(f.n, false);
    for (Var v = 1; v <= f.n; ++v) a.set(v, (mask >> (v - 1)) & 1u);
    visit(a);
  });
}

std::uint64_t brute_force_count(const Formula& f) {
  std::uint64_t count = 0;
  enumerate_models(f, [&](std::uint32_t) { ++count; });
  return count;
}

}  // namespace commsat
