// commsat: planted 3-SAT generation with community structure, plus
// verification, analysis and solver tooling for the generated instances.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 solver limit (or external timeout).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "commsat/analysis.hpp"
#include "commsat/batch.hpp"
#include "commsat/error.hpp"
#include "commsat/external.hpp"
#include "commsat/generator.hpp"
#include "commsat/io.hpp"
#include "commsat/solvers.hpp"

namespace fs = std::filesystem;
using namespace commsat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitLimit = 3;

fs::path default_out_dir() {
  const char* env = std::getenv("COMMSAT_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

void print_stats(const InstanceStats& st) {
  const double m = st.m ? double(st.m) : 1.0;
  fmt::print("n={} m={} r={}\n", st.n, st.m, double(st.m) / double(st.n ? st.n : 1));
  fmt::print("types: type0={} type1={} ({:.4f}) type2={} ({:.4f}) type3={} ({:.4f})\n", st.type0, st.type_counts[0],
             double(st.type_counts[0]) / m, st.type_counts[1], double(st.type_counts[1]) / m, st.type_counts[2],
             double(st.type_counts[2]) / m);
  fmt::print("intra_clauses={} ({:.4f}) intra_variables={}\n", st.intra_clause_count,
             double(st.intra_clause_count) / m, st.intra_variable_count);
  fmt::print("empirical_beta={:.6f} modularity={:.6f} degree_mean={:.4f} degree_cv={:.4f}\n", st.empirical_beta,
             st.modularity_q, st.degree_mean, st.degree_cv);
}

struct GenerateOptions {
  double p = 0.3, alpha = 1.0, beta = 0.5, r = 4.5;
  std::optional<double> p1, p2, q;
  std::string preset;
  Var n = 500;
  Community c = 20;
  std::uint64_t seed = 1;
  std::string output;
  bool solution_in_cnf = false;
  bool no_solution = false;
  bool no_duplicates = false;
};

GeneratorParams resolve(const GenerateOptions& o) {
  GeneratorParams params;
  params.p = o.p;
  params.alpha = o.alpha;
  params.r = o.r;
  params.n = o.n;
  params.c = o.c;
  params.seed = o.seed;
  params.no_duplicate_clauses = o.no_duplicates;
  const int sources = int(o.p1.has_value() || o.p2.has_value()) + int(o.q.has_value()) + int(!o.preset.empty());
  if (sources > 1) fail(ErrorKind::InvalidParameters, "choose one of --p1/--p2, --q or --preset");
  if (o.p1.has_value() != o.p2.has_value()) fail(ErrorKind::InvalidParameters, "--p1 and --p2 must be given together");
  if (o.p1)
    params.dist = ClauseDistribution::from_p1_p2(*o.p1, *o.p2);
  else if (o.q)
    params.dist = qhidden_params(*o.q);
  else if (!o.preset.empty())
    params.dist = preset_params(o.preset);
  else
    params.dist = midpoint_params(o.beta);
  params.validate();
  return params;
}

int cmd_generate(const GenerateOptions& o) {
  const GeneratorParams params = resolve(o);
  const GeneratedInstance inst = generate_formula(params);
  fs::path stem = o.output.empty()
                      ? default_out_dir() / fmt::format("commsat_p{}_a{}_b{}_r{}_n{}_c{}_s{}", o.p, o.alpha,
                                                        beta_of(params.dist), o.r, o.n, o.c, o.seed)
                      : fs::path(o.output);
  fs::path cnf = stem, meta = stem;
  cnf += ".cnf";
  meta += ".meta.json";
  write_file(cnf, write_dimacs(inst, o.solution_in_cnf));
  write_file(meta, write_metadata(inst, !o.no_solution));
  fmt::print("wrote {} and {}\n", cnf.string(), meta.string());
  fmt::print("p1={} p2={} p3={} beta={}\n", params.dist.p1, params.dist.p2, params.dist.p3, beta_of(params.dist));
  print_stats(instance_stats(inst));
  return kExitOk;
}

int cmd_verify(const std::string& cnf_path, const std::string& meta_path) {
  const Formula f = read_dimacs(read_file(cnf_path)).formula;
  const InstanceMetadata meta = read_metadata(read_file(meta_path));
  if (!meta.solution) {
    fmt::print("NOT-VERIFIABLE: metadata carries no planted solution\n");
    return kExitVerify;
  }
  if (meta.solution->size() != f.n) {
    fmt::print("FAIL: solution covers {} variables, formula has {}\n", meta.solution->size(), f.n);
    return kExitVerify;
  }
  std::array<std::size_t, 4> histogram{};
  std::optional<std::size_t> first_bad;
  for (std::size_t i = 0; i < f.m(); ++i) {
    const int t = clause_type(f.clauses[i], *meta.solution);
    ++histogram[std::min(t, 3)];
    if (t == 0 && !first_bad) first_bad = i;
  }
  fmt::print("types: type0={} type1={} type2={} type3={}\n", histogram[0], histogram[1], histogram[2], histogram[3]);
  if (first_bad) {
    fmt::print("FAIL: clause {} is falsified by the planted solution\n", *first_bad);
    return kExitVerify;
  }
  fmt::print("PASS: planted solution satisfies all {} clauses\n", f.m());
  return kExitOk;
}

int cmd_analyze(const std::string& cnf_path, const std::string& meta_path) {
  const Formula f = read_dimacs(read_file(cnf_path)).formula;
  const InstanceMetadata meta = read_metadata(read_file(meta_path));
  if (!meta.solution) {
    fmt::print("NOT-VERIFIABLE: metadata carries no planted solution\n");
    return kExitVerify;
  }
  print_stats(compute_stats(f, *meta.solution, meta.partition));
  return kExitOk;
}

struct SolveOptions {
  std::string cnf;
  std::string solver = "dpll";
  std::uint64_t max_decisions = UINT64_MAX;
  std::uint64_t max_flips = 10'000'000;
  double timeout = 0.0;
  double noise = 0.5;
  std::uint64_t seed = 0;
  std::string csv;
  bool print_model = false;
};

int cmd_solve(const SolveOptions& o) {
  const DimacsDocument doc = read_dimacs(read_file(o.cnf));
  if (doc.non_three_sat) fmt::print("c warning: input is not a strict 3-SAT formula\n");
  const SolveOutcome out = o.solver == "dpll"
                               ? dpll_solve(doc.formula, {o.max_decisions, o.timeout})
                               : walksat_probe(doc.formula, {o.noise, o.max_flips, o.seed, o.timeout});
  switch (out.status) {
    case SolveStatus::Sat: fmt::print("s SATISFIABLE\n"); break;
    case SolveStatus::Unsat: fmt::print("s UNSATISFIABLE\n"); break;
    case SolveStatus::LimitReached: fmt::print("s UNKNOWN\n"); break;
  }
  if (out.model && o.print_model) {
    std::string line = "v";
    for (Var v = 1; v <= out.model->size(); ++v)
      line += fmt::format(" {}", out.model->value(v) ? std::int64_t(v) : -std::int64_t(v));
    fmt::print("{} 0\n", line);
  }
  fmt::print("c solver={} status={} decisions={} propagations={} conflicts={} flips={} seconds={:.6f}\n", o.solver,
             to_string(out.status), out.stats.decisions, out.stats.propagations, out.stats.conflicts, out.stats.flips,
             out.stats.elapsed_seconds);
  if (!o.csv.empty()) {
    const bool fresh = !fs::exists(o.csv);
    std::ofstream csv(o.csv, std::ios::app);
    if (fresh) csv << "cnf,solver,status,decisions,propagations,conflicts,flips,seconds\n";
    csv << fmt::format("{},{},{},{},{},{},{},{}\n", o.cnf, o.solver, to_string(out.status), out.stats.decisions,
                       out.stats.propagations, out.stats.conflicts, out.stats.flips, out.stats.elapsed_seconds);
  }
  return out.status == SolveStatus::LimitReached ? kExitLimit : kExitOk;
}

int cmd_run_ext(const std::string& binary, const std::string& cnf, double timeout) {
  const ExternalResult res = run_external_solver(binary, cnf, timeout);
  fmt::print("status={}{} exit_code={} elapsed={:.3f}\n", to_string(res.status),
             res.crash_reason.empty() ? "" : fmt::format(" reason={}", res.crash_reason), res.exit_code,
             res.elapsed_seconds);
  if (res.status == ExternalStatus::Sat) fmt::print("model={}\n", res.model ? "verified" : "absent");
  switch (res.status) {
    case ExternalStatus::Sat:
    case ExternalStatus::Unsat: return kExitOk;
    case ExternalStatus::Timeout: return kExitLimit;
    case ExternalStatus::Crash: return kExitVerify;
  }
  return kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planted 3-SAT generator with controllable community structure and clause distribution"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate one instance (CNF + metadata sidecar)");
  generate->add_option("--p", gen.p, "Intra-community clause ratio")->capture_default_str();
  generate->add_option("--alpha", gen.alpha, "Intra-community variable ratio")->capture_default_str();
  generate->add_option("--c", gen.c, "Number of communities")->capture_default_str();
  generate->add_option("--beta", gen.beta, "True-literal ratio, resolved to the midpoint (p1, p2)")->capture_default_str();
  generate->add_option("--p1", gen.p1, "Explicit Type-1 probability (with --p2)");
  generate->add_option("--p2", gen.p2, "Explicit Type-2 probability (with --p1)");
  generate->add_option("--q", gen.q, "q-hidden clause distribution parameter");
  generate->add_option("--preset", gen.preset, "one-hidden or two-hidden");
  generate->add_option("--r", gen.r, "Clause to variable ratio")->capture_default_str();
  generate->add_option("--n", gen.n, "Number of variables")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  generate->add_option("-o,--output", gen.output, "Output path stem (default: $COMMSAT_OUT_DIR/<derived name>)");
  generate->add_flag("--solution-in-cnf", gen.solution_in_cnf, "Also write the planted solution as a CNF comment");
  generate->add_flag("--no-solution", gen.no_solution, "Leave the planted solution out of the metadata");
  generate->add_flag("--no-duplicate-clauses", gen.no_duplicates, "Reject repeated clauses");

  ExperimentGrid grid;
  grid.out_dir = default_out_dir();
  std::string p_list = "0.3", alpha_list = "1.0", beta_list = "0.5", r_list = "4.5", n_list = "500", c_list = "20";
  std::string batch_solver = "none";
  auto* batch = app.add_subcommand("batch", "Generate a parameter grid and write instance and aggregate CSVs");
  batch->add_option("--p", p_list, "Values of p: 'a,b,c' or 'start:stop:step'")->capture_default_str();
  batch->add_option("--alpha", alpha_list, "Values of alpha")->capture_default_str();
  batch->add_option("--beta", beta_list, "Values of beta")->capture_default_str();
  batch->add_option("--r", r_list, "Values of r")->capture_default_str();
  batch->add_option("--n", n_list, "Values of n")->capture_default_str();
  batch->add_option("--c", c_list, "Values of c")->capture_default_str();
  batch->add_option("--per-setting", grid.per_setting, "Instances per setting")->capture_default_str();
  batch->add_option("--seed", grid.master_seed, "Master seed")->capture_default_str();
  batch->add_option("-o,--out", grid.out_dir, "Output directory (default: $COMMSAT_OUT_DIR or .)");
  batch->add_option("-j,--jobs", grid.workers, "Worker threads")->capture_default_str();
  batch->add_option("--solver", batch_solver, "Run none, dpll or walksat on each instance")
      ->check(CLI::IsMember({"none", "dpll", "walksat"}))
      ->capture_default_str();
  batch->add_option("--max-decisions", grid.max_decisions, "DPLL decision limit")->capture_default_str();
  batch->add_option("--max-flips", grid.max_flips, "WalkSAT flip limit")->capture_default_str();
  batch->add_option("--noise", grid.noise, "WalkSAT noise")->capture_default_str();

  std::string cnf_path, meta_path;
  auto* verify = app.add_subcommand("verify", "Check that the planted solution satisfies a CNF");
  verify->add_option("cnf", cnf_path)->required();
  verify->add_option("metadata", meta_path)->required();

  auto* analyze = app.add_subcommand("analyze", "Print instance statistics");
  analyze->add_option("cnf", cnf_path)->required();
  analyze->add_option("metadata", meta_path)->required();

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Run the built-in DPLL or WalkSAT solver");
  solve->add_option("cnf", solve_opts.cnf)->required();
  solve->add_option("--solver", solve_opts.solver)->check(CLI::IsMember({"dpll", "walksat"}))->capture_default_str();
  solve->add_option("--max-decisions", solve_opts.max_decisions, "DPLL decision limit");
  solve->add_option("--max-flips", solve_opts.max_flips, "WalkSAT flip limit")->capture_default_str();
  solve->add_option("--timeout", solve_opts.timeout, "Time limit in seconds (0 = none)")->capture_default_str();
  solve->add_option("--noise", solve_opts.noise, "WalkSAT noise")->capture_default_str();
  solve->add_option("--seed", solve_opts.seed, "WalkSAT seed")->capture_default_str();
  solve->add_option("--csv", solve_opts.csv, "Append a result row to this CSV file");
  solve->add_flag("--model", solve_opts.print_model, "Print the model as a 'v' line");

  std::string ext_binary, ext_cnf;
  double ext_timeout = 1800.0;
  auto* run_ext = app.add_subcommand("run-ext", "Run an external solver binary with a wallclock limit");
  run_ext->add_option("binary", ext_binary)->required();
  run_ext->add_option("cnf", ext_cnf)->required();
  run_ext->add_option("--timeout", ext_timeout, "Wallclock timeout in seconds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*batch) {
      grid.p = parse_value_list(p_list);
      grid.alpha = parse_value_list(alpha_list);
      grid.beta = parse_value_list(beta_list);
      grid.r = parse_value_list(r_list);
      grid.n.clear();
      for (double v : parse_value_list(n_list)) grid.n.push_back(static_cast<Var>(v));
      grid.c.clear();
      for (double v : parse_value_list(c_list)) grid.c.push_back(static_cast<Community>(v));
      grid.solver = batch_solver == "dpll" ? BatchSolver::Dpll
                    : batch_solver == "walksat" ? BatchSolver::WalkSat
                                                : BatchSolver::None;
      for (const Setting& s : grid.settings()) s.params().validate();
      const auto summary = run_batch(grid, [](const std::string& msg) { fmt::print("{}\n", msg); });
      return summary.failed ? kExitVerify : kExitOk;
    }
    if (*verify) return cmd_verify(cnf_path, meta_path);
    if (*analyze) return cmd_analyze(cnf_path, meta_path);
    if (*solve) return cmd_solve(solve_opts);
    if (*run_ext) return cmd_run_ext(ext_binary, ext_cnf, ext_timeout);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return e.kind() == ErrorKind::InvalidParameters || e.kind() == ErrorKind::CommunityTooSmall ? kExitUsage
                                                                                                 : kExitVerify;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitVerify;
  }
  return kExitUsage;
}
