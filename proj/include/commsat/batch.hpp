#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "commsat/analysis.hpp"
#include "commsat/generator.hpp"
#include "commsat/solvers.hpp"

namespace commsat {

/// One point of an experiment grid. The clause distribution is the midpoint
/// resolution of `beta`.
struct Setting {
  double p = 0.3;
  double alpha = 1.0;
  double beta = 0.5;
  double r = 4.5;
  Var n = 500;
  Community c = 20;

  /// Canonical text form; file names and seeds derive from it.
  std::string key() const;
  GeneratorParams params() const;
};

enum class BatchSolver { None, Dpll, WalkSat };

struct ExperimentGrid {
  std::vector<double> p{0.3};
  std::vector<double> alpha{1.0};
  std::vector<double> beta{0.5};
  std::vector<double> r{4.5};
  std::vector<Var> n{500};
  std::vector<Community> c{20};
  std::size_t per_setting = 50;
  std::uint64_t master_seed = 0;
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;

  BatchSolver solver = BatchSolver::None;
  std::uint64_t max_decisions = 100'000'000;
  std::uint64_t max_flips = 10'000'000;
  double noise = 0.5;

  /// Cartesian product in p, alpha, beta, r, n, c order (c varies fastest).
  std::vector<Setting> settings() const;
  std::size_t total_instances() const { return settings().size() * per_setting; }
};

/// Parses "a,b,c" or "start:stop:step" (inclusive stop).
std::vector<double> parse_value_list(std::string_view text);

/// Seed of instance `index` under `setting`: independent of the rest of the grid.
std::uint64_t instance_seed(std::uint64_t master_seed, const Setting& setting, std::size_t index);
/// File stem (no extension) of instance `index` under `setting`.
std::string instance_stem(std::uint64_t master_seed, const Setting& setting, std::size_t index);

struct InstanceRow {
  std::string setting;
  std::size_t index = 0;
  Setting values;
  std::uint64_t master_seed = 0;
  std::uint64_t derived_seed = 0;
  std::string status = "ok";  ///< "ok" or "error"
  std::string error;
  InstanceStats stats;
  std::string solver = "none";
  std::string solver_status;
  SolveStats solve;
};

struct AggregateRow {
  std::string setting;
  Setting values;
  std::size_t ok = 0;
  std::size_t errors = 0;
  std::vector<double> mean;  ///< one entry per aggregate_metric_names()
  std::vector<double> stddev;
  double median_decisions = 0.0;
  double median_flips = 0.0;
};

const std::vector<std::string>& aggregate_metric_names();

std::string instance_csv_header();
std::string to_csv(const InstanceRow& row);
InstanceRow parse_instance_csv_row(std::string_view line);

std::string aggregate_csv_header();
std::string to_csv(const AggregateRow& row);

/// Groups rows by setting (in first-appearance order) and summarizes the ok rows.
std::vector<AggregateRow> aggregate(const std::vector<InstanceRow>& rows);

struct BatchSummary {
  std::size_t total = 0;
  std::size_t generated = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;
  std::vector<InstanceRow> rows;
  std::vector<AggregateRow> aggregates;
};

/// Generates (or reuses) every instance of the grid under out_dir, then writes
/// instances.csv and aggregate.csv. Instances whose files already exist are
/// loaded instead of regenerated; cached solver results are reused too.
BatchSummary run_batch(const ExperimentGrid& grid, const std::function<void(const std::string&)>& log = {});

}  // namespace commsat
