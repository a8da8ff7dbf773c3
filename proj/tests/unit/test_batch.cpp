#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "commsat/batch.hpp"
#include "commsat/error.hpp"
#include "commsat/io.hpp"

using namespace commsat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentGrid small_grid(const fs::path& dir) {
  ExperimentGrid grid;
  grid.p = {0.2, 0.8};
  grid.beta = {0.5};
  grid.r = {3.0};
  grid.n = {60};
  grid.c = {5};
  grid.per_setting = 4;
  grid.master_seed = 77;
  grid.out_dir = dir;
  grid.solver = BatchSolver::Dpll;
  return grid;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("value lists") {
  CHECK(parse_value_list("0.1,0.5,0.9") == std::vector<double>{0.1, 0.5, 0.9});
  const auto range = parse_value_list("3:5:0.5");
  REQUIRE(range.size() == 5);
  CHECK(range.front() == doctest::Approx(3.0));
  CHECK(range.back() == doctest::Approx(5.0));
  CHECK(parse_value_list("0:1:0.1").size() == 11);
  CHECK(parse_value_list("7") == std::vector<double>{7.0});
  CHECK_THROWS_AS(parse_value_list("1:0:0.5"), Error);
  CHECK_THROWS_AS(parse_value_list("1:2:0"), Error);
  CHECK_THROWS_AS(parse_value_list("a,b"), Error);
  CHECK_THROWS_AS(parse_value_list(""), Error);
}

TEST_CASE("grid expansion and deterministic names") {
  ExperimentGrid grid;
  grid.p = {0.1, 0.2};
  grid.c = {10, 20, 30};
  grid.per_setting = 2;
  const auto settings = grid.settings();
  REQUIRE(settings.size() == 6);
  CHECK(settings[0].c == 10);
  CHECK(settings[1].c == 20);
  CHECK(settings[3].p == 0.2);
  CHECK(grid.total_instances() == 12);

  const Setting s = settings[0];
  CHECK(instance_stem(5, s, 3) == instance_stem(5, s, 3));
  CHECK(instance_stem(5, s, 3) == "p0.1_a1_b0.5_r4.5_n500_c10_s5_i0003");
  CHECK(instance_seed(5, s, 3) == instance_seed(5, s, 3));
  std::set<std::uint64_t> seeds;
  for (const auto& st : settings)
    for (std::size_t i = 0; i < 2; ++i) seeds.insert(instance_seed(5, st, i));
  CHECK(seeds.size() == 12);
  // A setting's seeds do not depend on the rest of the grid.
  ExperimentGrid other = grid;
  other.p = {0.2};
  CHECK(instance_seed(5, other.settings()[0], 1) == instance_seed(5, settings[3], 1));
}

TEST_CASE("batch run writes instances, metadata and CSVs; rerun reuses everything") {
  TempDir dir("commsat_batch_test");
  const auto grid = small_grid(dir.path);
  const auto first = run_batch(grid);
  CHECK(first.total == 8);
  CHECK(first.generated == 8);
  CHECK(first.failed == 0);
  CHECK(first.aggregates.size() == 2);
  for (const auto& row : first.rows) {
    const auto stem = dir.path / instance_stem(77, row.values, row.index);
    CHECK(fs::exists(fs::path(stem.string() + ".cnf")));
    CHECK(fs::exists(fs::path(stem.string() + ".meta.json")));
    CHECK(row.solver_status == "SAT");
    CHECK(row.stats.type0 == 0);
    const auto meta = read_metadata(read_file(stem.string() + ".meta.json"));
    CHECK(meta.derived_seed == instance_seed(77, row.values, row.index));
    REQUIRE(meta.solution);
    CHECK(evaluate(read_dimacs(read_file(stem.string() + ".cnf")).formula, *meta.solution).satisfied);
  }
  const auto instances_csv = read_file(dir.path / "instances.csv");
  const auto aggregate_csv = read_file(dir.path / "aggregate.csv");

  const auto second = run_batch(grid);
  CHECK(second.generated == 0);
  CHECK(second.reused == 8);
  CHECK(read_file(dir.path / "instances.csv") == instances_csv);
  CHECK(read_file(dir.path / "aggregate.csv") == aggregate_csv);

  // Deleting one instance regenerates exactly that instance, identically.
  const auto victim = dir.path / (instance_stem(77, first.rows[5].values, first.rows[5].index) + ".cnf");
  const auto before = read_file(victim);
  fs::remove(victim);
  const auto third = run_batch(grid);
  CHECK(third.generated == 1);
  CHECK(read_file(victim) == before);
}

TEST_CASE("aggregate.csv is reproducible from instances.csv") {
  TempDir dir("commsat_batch_agg_test");
  const auto summary = run_batch(small_grid(dir.path));
  const auto lines = lines_of(read_file(dir.path / "instances.csv"));
  REQUIRE(lines.size() == 9);
  CHECK(lines[0] == instance_csv_header());
  std::vector<InstanceRow> parsed;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    parsed.push_back(parse_instance_csv_row(lines[i]));
    CHECK(to_csv(parsed.back()) == lines[i]);
  }
  std::string again = aggregate_csv_header() + "\n";
  for (const auto& agg : aggregate(parsed)) again += to_csv(agg) + "\n";
  CHECK(again == read_file(dir.path / "aggregate.csv"));

  // Independent recomputation of one aggregate column.
  const auto& names = aggregate_metric_names();
  const auto q_index = std::size_t(std::find(names.begin(), names.end(), "modularity") - names.begin());
  double sum = 0.0, sq = 0.0;
  std::size_t k = 0;
  for (const auto& row : summary.rows)
    if (row.setting == summary.aggregates[0].setting) {
      sum += row.stats.modularity_q;
      sq += row.stats.modularity_q * row.stats.modularity_q;
      ++k;
    }
  const double mean = sum / double(k);
  CHECK(summary.aggregates[0].mean[q_index] == doctest::Approx(mean));
  CHECK(summary.aggregates[0].stddev[q_index] ==
        doctest::Approx(std::sqrt((sq - double(k) * mean * mean) / double(k - 1))));
  CHECK(summary.aggregates[0].ok == 4);
}

TEST_CASE("worker count does not change results") {
  TempDir a("commsat_batch_w1"), b("commsat_batch_w3");
  auto grid = small_grid(a.path);
  grid.solver = BatchSolver::WalkSat;
  run_batch(grid);
  grid.out_dir = b.path;
  grid.workers = 3;
  run_batch(grid);
  // Wallclock columns differ between runs; compare everything else.
  auto strip_time = [](const std::string& text) {
    std::vector<InstanceRow> rows;
    const auto lines = lines_of(text);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      rows.push_back(parse_instance_csv_row(lines[i]));
      rows.back().solve.elapsed_seconds = 0;
    }
    std::string out;
    for (const auto& r : rows) out += to_csv(r) + "\n";
    return out;
  };
  CHECK(strip_time(read_file(a.path / "instances.csv")) == strip_time(read_file(b.path / "instances.csv")));
  for (const auto& entry : fs::directory_iterator(a.path))
    if (entry.path().extension() == ".cnf")
      CHECK(read_file(entry.path()) == read_file(b.path / entry.path().filename()));
}

TEST_CASE("failed settings are reported per row") {
  TempDir dir("commsat_batch_fail");
  ExperimentGrid grid;
  grid.p = {0.5};
  grid.c = {2};  // the inter-community branch needs three communities
  grid.n = {30};
  grid.per_setting = 2;
  grid.out_dir = dir.path;
  const auto summary = run_batch(grid);
  CHECK(summary.failed == 2);
  CHECK(summary.rows[0].status == "error");
  CHECK(summary.rows[0].error.find("invalid-parameters") != std::string::npos);
  CHECK(summary.aggregates[0].ok == 0);
  CHECK(summary.aggregates[0].errors == 2);
}
