#include "commsat/batch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/format.h>
#include "json.hpp"

#include "commsat/error.hpp"
#include "commsat/io.hpp"

namespace commsat {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ch == ',' ? ';' : ' ';
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorKind::Parse, fmt::format("bad number '{}'", s));
  return v;
}

template <typename T>
T to_uint(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorKind::Parse, fmt::format("bad integer '{}'", s));
  return v;
}

double snap(double x) { return std::round(x * 1e9) / 1e9; }

std::vector<double> metric_values(const InstanceRow& row) {
  const auto& st = row.stats;
  const double m = st.m ? double(st.m) : 1.0;
  return {double(st.intra_clause_count) / m,
          double(st.intra_clause_count),
          double(st.intra_variable_count),
          double(st.type_counts[0]) / m,
          double(st.type_counts[1]) / m,
          double(st.type_counts[2]) / m,
          st.empirical_beta,
          st.modularity_q,
          st.degree_cv,
          double(row.solve.decisions),
          double(row.solve.flips),
          row.solve.elapsed_seconds};
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : (xs[mid - 1] + xs[mid]) / 2.0;
}

const char* solver_name(BatchSolver s) {
  switch (s) {
    case BatchSolver::Dpll: return "dpll";
    case BatchSolver::WalkSat: return "walksat";
    case BatchSolver::None: break;
  }
  return "none";
}

}  // namespace

std::string Setting::key() const {
  return fmt::format("p={}_alpha={}_beta={}_r={}_n={}_c={}", p, alpha, beta, r, n, c);
}

GeneratorParams Setting::params() const {
  GeneratorParams params;
  params.p = p;
  params.alpha = alpha;
  params.dist = midpoint_params(beta);
  params.r = r;
  params.n = n;
  params.c = c;
  return params;
}

std::vector<Setting> ExperimentGrid::settings() const {
  std::vector<Setting> out;
  for (double vp : p)
    for (double va : alpha)
      for (double vb : beta)
        for (double vr : r)
          for (Var vn : n)
            for (Community vc : c) out.push_back({vp, va, vb, vr, vn, vc});
  return out;
}

std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> out;
  const auto range = split(text, ':');
  if (range.size() == 3) {
    const double start = to_double(range[0]), stop = to_double(range[1]), step = to_double(range[2]);
    if (!(step > 0.0) || stop < start)
      fail(ErrorKind::InvalidParameters, fmt::format("bad range '{}': need start <= stop and step > 0", text));
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(snap(start + double(i) * step));
    return out;
  }
  if (range.size() != 1) fail(ErrorKind::InvalidParameters, fmt::format("bad value list '{}'", text));
  for (std::string_view item : split(text, ',')) out.push_back(to_double(item));
  return out;
}

std::uint64_t instance_seed(std::uint64_t master_seed, const Setting& setting, std::size_t index) {
  return derive_seed(master_seed ^ fnv1a(setting.key()), index);
}

std::string instance_stem(std::uint64_t master_seed, const Setting& s, std::size_t index) {
  return fmt::format("p{}_a{}_b{}_r{}_n{}_c{}_s{}_i{:04}", s.p, s.alpha, s.beta, s.r, s.n, s.c, master_seed, index);
}

const std::vector<std::string>& aggregate_metric_names() {
  static const std::vector<std::string> names{
      "intra_clause_fraction", "intra_clause_count", "intra_variable_count", "type1_fraction",
      "type2_fraction",        "type3_fraction",     "empirical_beta",       "modularity",
      "degree_cv",             "decisions",          "flips",                "solve_seconds"};
  return names;
}

std::string instance_csv_header() {
  return "setting,index,p,alpha,beta,r,n,c,m,master_seed,derived_seed,status,error,type0,type1,type2,type3,"
         "intra_clause_count,intra_clause_fraction,intra_variable_count,empirical_beta,modularity,degree_mean,"
         "degree_cv,solver,solver_status,decisions,propagations,conflicts,flips,solve_seconds";
}

std::string to_csv(const InstanceRow& row) {
  const auto& s = row.values;
  const auto& st = row.stats;
  const double fraction = st.m ? double(st.intra_clause_count) / double(st.m) : 0.0;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                     row.setting, row.index, s.p, s.alpha, s.beta, s.r, s.n, s.c, st.m, row.master_seed,
                     row.derived_seed, row.status, sanitize(row.error), st.type0, st.type_counts[0], st.type_counts[1],
                     st.type_counts[2], st.intra_clause_count, fraction, st.intra_variable_count, st.empirical_beta,
                     st.modularity_q, st.degree_mean, st.degree_cv, row.solver, row.solver_status, row.solve.decisions,
                     row.solve.propagations, row.solve.conflicts, row.solve.flips, row.solve.elapsed_seconds);
}

InstanceRow parse_instance_csv_row(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() != 31) fail(ErrorKind::Parse, fmt::format("instance row has {} fields, expected 31", f.size()));
  InstanceRow row;
  row.setting = std::string(f[0]);
  row.index = to_uint<std::size_t>(f[1]);
  row.values = {to_double(f[2]), to_double(f[3]), to_double(f[4]),
                to_double(f[5]), to_uint<Var>(f[6]), to_uint<Community>(f[7])};
  row.stats.n = row.values.n;
  row.stats.m = to_uint<std::size_t>(f[8]);
  row.master_seed = to_uint<std::uint64_t>(f[9]);
  row.derived_seed = to_uint<std::uint64_t>(f[10]);
  row.status = std::string(f[11]);
  row.error = std::string(f[12]);
  row.stats.type0 = to_uint<std::size_t>(f[13]);
  for (int t = 0; t < 3; ++t) row.stats.type_counts[t] = to_uint<std::size_t>(f[14 + t]);
  row.stats.intra_clause_count = to_uint<std::size_t>(f[17]);
  row.stats.intra_variable_count = to_uint<std::size_t>(f[19]);
  row.stats.empirical_beta = to_double(f[20]);
  row.stats.modularity_q = to_double(f[21]);
  row.stats.degree_mean = to_double(f[22]);
  row.stats.degree_cv = to_double(f[23]);
  row.solver = std::string(f[24]);
  row.solver_status = std::string(f[25]);
  row.solve.decisions = to_uint<std::uint64_t>(f[26]);
  row.solve.propagations = to_uint<std::uint64_t>(f[27]);
  row.solve.conflicts = to_uint<std::uint64_t>(f[28]);
  row.solve.flips = to_uint<std::uint64_t>(f[29]);
  row.solve.elapsed_seconds = to_double(f[30]);
  return row;
}

std::string aggregate_csv_header() {
  std::string h = "setting,p,alpha,beta,r,n,c,ok,errors";
  for (const auto& name : aggregate_metric_names()) h += fmt::format(",{}_mean,{}_std", name, name);
  return h + ",decisions_median,flips_median";
}

std::string to_csv(const AggregateRow& row) {
  const auto& s = row.values;
  std::string out = fmt::format("{},{},{},{},{},{},{},{},{}", row.setting, s.p, s.alpha, s.beta, s.r, s.n, s.c, row.ok,
                                row.errors);
  for (std::size_t i = 0; i < row.mean.size(); ++i) out += fmt::format(",{},{}", row.mean[i], row.stddev[i]);
  return out + fmt::format(",{},{}", row.median_decisions, row.median_flips);
}

std::vector<AggregateRow> aggregate(const std::vector<InstanceRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::string, std::size_t> slot;
  std::vector<std::vector<std::vector<double>>> samples;
  for (const auto& row : rows) {
    auto [it, fresh] = slot.try_emplace(row.setting, out.size());
    if (fresh) {
      AggregateRow agg;
      agg.setting = row.setting;
      agg.values = row.values;
      out.push_back(agg);
      samples.emplace_back();
    }
    AggregateRow& agg = out[it->second];
    if (row.status != "ok") {
      ++agg.errors;
      continue;
    }
    ++agg.ok;
    samples[it->second].push_back(metric_values(row));
  }

  const std::size_t metrics = aggregate_metric_names().size();
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& agg = out[g];
    const auto& xs = samples[g];
    agg.mean.assign(metrics, 0.0);
    agg.stddev.assign(metrics, 0.0);
    for (std::size_t k = 0; k < metrics; ++k) {
      double sum = 0.0;
      for (const auto& x : xs) sum += x[k];
      const double mean = xs.empty() ? 0.0 : sum / double(xs.size());
      double ss = 0.0;
      for (const auto& x : xs) ss += (x[k] - mean) * (x[k] - mean);
      agg.mean[k] = mean;
      agg.stddev[k] = xs.size() > 1 ? std::sqrt(ss / double(xs.size() - 1)) : 0.0;
    }
    std::vector<double> decisions, flips;
    for (const auto& x : xs) {
      decisions.push_back(x[9]);
      flips.push_back(x[10]);
    }
    agg.median_decisions = median(decisions);
    agg.median_flips = median(flips);
  }
  return out;
}

BatchSummary run_batch(const ExperimentGrid& grid, const std::function<void(const std::string&)>& log) {
  using nlohmann::json;
  if (grid.per_setting < 1) fail(ErrorKind::InvalidParameters, "instances per setting must be at least 1");
  const auto settings = grid.settings();
  BatchSummary summary;
  summary.total = settings.size() * grid.per_setting;
  if (log)
    log(fmt::format("{} settings x {} instances per setting = {} instances", settings.size(), grid.per_setting,
                    summary.total));
  std::filesystem::create_directories(grid.out_dir);

  summary.rows.resize(summary.total);
  std::atomic<std::size_t> next{0}, generated{0}, reused{0};
  auto work = [&] {
    for (std::size_t task; (task = next.fetch_add(1)) < summary.total;) {
      const Setting& setting = settings[task / grid.per_setting];
      const std::size_t index = task % grid.per_setting;
      InstanceRow& row = summary.rows[task];
      row.setting = setting.key();
      row.index = index;
      row.values = setting;
      row.master_seed = grid.master_seed;
      row.derived_seed = instance_seed(grid.master_seed, setting, index);
      row.solver = solver_name(grid.solver);
      const auto stem = grid.out_dir / instance_stem(grid.master_seed, setting, index);
      auto cnf_path = stem, meta_path = stem, solve_path = stem;
      cnf_path += ".cnf";
      meta_path += ".meta.json";
      solve_path += ".solve.json";
      try {
        Formula formula;
        InstanceMetadata meta;
        if (std::filesystem::exists(cnf_path) && std::filesystem::exists(meta_path)) {
          formula = read_dimacs(read_file(cnf_path)).formula;
          meta = read_metadata(read_file(meta_path));
          if (!meta.solution) fail(ErrorKind::Parse, fmt::format("'{}' lacks the planted solution", meta_path.string()));
          ++reused;
        } else {
          GeneratorParams params = setting.params();
          params.seed = row.derived_seed;
          GeneratedInstance inst = generate_formula(params);
          inst.master_seed = grid.master_seed;
          inst.index = index;
          write_file(cnf_path, write_dimacs(inst));
          write_file(meta_path, write_metadata(inst));
          formula = std::move(inst.formula);
          meta = metadata_of(inst);
          ++generated;
        }
        row.stats = compute_stats(formula, *meta.solution, meta.partition);

        if (grid.solver != BatchSolver::None) {
          json cached;
          if (std::filesystem::exists(solve_path)) cached = json::parse(read_file(solve_path));
          if (cached.is_object() && cached.value("solver", "") == row.solver) {
            row.solver_status = cached.at("status").get<std::string>();
            row.solve.decisions = cached.at("decisions").get<std::uint64_t>();
            row.solve.propagations = cached.at("propagations").get<std::uint64_t>();
            row.solve.conflicts = cached.at("conflicts").get<std::uint64_t>();
            row.solve.flips = cached.at("flips").get<std::uint64_t>();
            row.solve.elapsed_seconds = cached.at("seconds").get<double>();
          } else {
            SolveOutcome outcome =
                grid.solver == BatchSolver::Dpll
                    ? dpll_solve(formula, {grid.max_decisions, 0.0})
                    : walksat_probe(formula, {grid.noise, grid.max_flips, row.derived_seed, 0.0});
            row.solver_status = to_string(outcome.status);
            row.solve = outcome.stats;
            const json record = {{"solver", row.solver},
                                 {"status", row.solver_status},
                                 {"decisions", row.solve.decisions},
                                 {"propagations", row.solve.propagations},
                                 {"conflicts", row.solve.conflicts},
                                 {"flips", row.solve.flips},
                                 {"seconds", row.solve.elapsed_seconds}};
            write_file(solve_path, record.dump(2) + "\n");
          }
        }
      } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
        row.stats = {};
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(grid.workers, static_cast<unsigned>(summary.total)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  summary.generated = generated;
  summary.reused = reused;
  summary.failed = static_cast<std::size_t>(
      std::count_if(summary.rows.begin(), summary.rows.end(), [](const InstanceRow& r) { return r.status != "ok"; }));
  summary.aggregates = aggregate(summary.rows);

  std::string instances = instance_csv_header() + "\n";
  for (const auto& row : summary.rows) instances += to_csv(row) + "\n";
  std::string aggregates = aggregate_csv_header() + "\n";
  for (const auto& agg : summary.aggregates) aggregates += to_csv(agg) + "\n";
  write_file(grid.out_dir / "instances.csv", instances);
  write_file(grid.out_dir / "aggregate.csv", aggregates);
  if (log)
    log(fmt::format("generated {}, reused {}, failed {}", summary.generated, summary.reused, summary.failed));
  return summary;
}

}  // namespace commsat
