#include "doctest.h"

#include <filesystem>

#include "json.hpp"

#include "commsat/error.hpp"
#include "commsat/io.hpp"

using namespace commsat;

namespace {

const std::filesystem::path kGolden = COMMSAT_GOLDEN_DIR;

Clause cl(std::int64_t a, std::int64_t b, std::int64_t c) {
  return Clause::three(Literal::from_dimacs(a), Literal::from_dimacs(b), Literal::from_dimacs(c));
}

GeneratedInstance small_instance() {
  GeneratedInstance inst;
  inst.formula = {6, {cl(1, -2, 3), cl(-4, 5, 6), cl(2, -5, -6)}};
  inst.solution = Assignment(std::vector<bool>{true, true, false, false, true, false});
  inst.partition = CommunityPartition::empty(6, 2);
  for (Var v = 1; v <= 6; ++v) {
    inst.partition.home[v] = v <= 3 ? 1 : 2;
    inst.partition.add(v, inst.partition.home[v]);
  }
  inst.params.p = 1.0;
  inst.params.alpha = 1.0;
  inst.params.c = 2;
  inst.params.dist = {0.5, 0.5, 0.0};
  inst.params.r = 0.5;
  inst.params.n = 6;
  inst.params.seed = 99;
  inst.provenance = {{SelectionMode::Intra, 2}, {SelectionMode::Intra, 1}, {SelectionMode::Intra, 2}};
  inst.master_seed = 7;
  inst.index = 2;
  return inst;
}

std::size_t parse_error_line(std::string_view text) {
  try {
    read_dimacs(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("DIMACS writer matches the golden files") {
  const auto inst = small_instance();
  CHECK(write_dimacs(inst) == read_file(kGolden / "planted_small.cnf"));
  CHECK(write_dimacs(inst, true) == read_file(kGolden / "planted_small_solution.cnf"));
  CHECK(write_dimacs(inst.formula) == "p cnf 6 3\n1 -2 3 0\n-4 5 6 0\n2 -5 -6 0\n");
}

TEST_CASE("the solution comment is absent unless requested") {
  const auto text = write_dimacs(small_instance());
  CHECK(text.find("c solution") == std::string::npos);
  CHECK(write_dimacs(small_instance(), true).find("c solution 1 2 -3 -4 5 -6\n") != std::string::npos);
}

TEST_CASE("DIMACS round trip") {
  const auto inst = small_instance();
  for (bool with_solution : {false, true}) {
    const auto doc = read_dimacs(write_dimacs(inst, with_solution));
    CHECK(doc.formula == inst.formula);
    CHECK_FALSE(doc.non_three_sat);
  }
  GeneratorParams params;
  params.n = 150;
  params.seed = 8;
  const auto big = generate_formula(params);
  CHECK(read_dimacs(write_dimacs(big)).formula == big.formula);
}

TEST_CASE("foreign DIMACS with comments, split clauses and a trailer") {
  const auto doc = read_dimacs(read_file(kGolden / "foreign.cnf"));
  CHECK(doc.formula.n == 5);
  REQUIRE(doc.formula.m() == 4);
  CHECK(doc.formula.clauses[0] == cl(1, -2, 3));
  CHECK(doc.formula.clauses[1] == Clause{{1, false}, {2, true}, {4, true}});
  CHECK(doc.formula.clauses[2] == Clause{{5, true}});
  CHECK(doc.formula.clauses[3].size() == 4);
  CHECK(doc.non_three_sat);
}

TEST_CASE("DIMACS parse errors carry line numbers") {
  CHECK(parse_error_line("p cnf 3\n1 2 3 0\n") == 1);
  CHECK(parse_error_line("c hi\np cnf 3 1\n1 2 4 0\n") == 3);
  CHECK(parse_error_line("p cnf 3 1\n1 2 3\n") == 2);
  CHECK(parse_error_line("p cnf 3 2\n1 2 3 0\n") > 0);
  CHECK(parse_error_line("p cnf 3 1\n1 x 3 0\n") == 2);
  CHECK(parse_error_line("1 2 3 0\np cnf 3 1\n") == 1);
  CHECK(parse_error_line("c only comments\n") > 0);
  CHECK(parse_error_line("p cnf 3 1\np cnf 3 1\n1 2 3 0\n") == 2);
  try {
    read_dimacs("p cnf 3 1\n1 2 3\n");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("metadata round trip") {
  GeneratorParams params;
  params.n = 80;
  params.c = 6;
  params.alpha = 0.7;
  params.seed = 12;
  auto inst = generate_formula(params);
  inst.master_seed = 3;
  inst.index = 5;

  const auto meta = metadata_of(inst);
  const auto back = read_metadata(write_metadata(meta));
  CHECK(back == meta);
  CHECK(back.partition == inst.partition);
  REQUIRE(back.solution);
  CHECK(*back.solution == inst.solution);
  CHECK(back.provenance == inst.provenance);
  CHECK(back.params.seed == inst.params.seed);

  const auto doc = nlohmann::json::parse(write_metadata(inst));
  CHECK(doc["schema_version"] == kMetadataSchemaVersion);
  CHECK(doc["params"]["m"] == inst.formula.m());
  CHECK(doc["partition"]["home"].size() == 80);
}

TEST_CASE("metadata without the solution") {
  const auto inst = small_instance();
  const auto text = write_metadata(inst, false);
  CHECK(nlohmann::json::parse(text).contains("solution") == false);
  CHECK_FALSE(read_metadata(text).solution);
}

TEST_CASE("metadata schema checks") {
  auto doc = nlohmann::json::parse(write_metadata(small_instance()));
  auto kind_of = [](const std::string& text) {
    try {
      read_metadata(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  auto newer = doc;
  newer["schema_version"] = kMetadataSchemaVersion + 1;
  CHECK(kind_of(newer.dump()) == ErrorKind::SchemaVersion);
  auto foreign = doc;
  foreign["schema"] = "something-else";
  CHECK(kind_of(foreign.dump()) == ErrorKind::SchemaVersion);
  CHECK(kind_of("{not json") == ErrorKind::Parse);
  auto broken = doc;
  broken["params"].erase("alpha");
  CHECK(kind_of(broken.dump()) == ErrorKind::Parse);
  auto bad_prov = doc;
  bad_prov["provenance"]["types"] = "12";
  CHECK(kind_of(bad_prov.dump()) == ErrorKind::Parse);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "commsat_io_test";
  std::filesystem::remove_all(dir);
  write_file(dir / "sub" / "a.txt", "hello\n");
  CHECK(read_file(dir / "sub" / "a.txt") == "hello\n");
  CHECK_FALSE(std::filesystem::exists(dir / "sub" / "a.txt.tmp"));
  try {
    read_file(dir / "missing");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  std::filesystem::remove_all(dir);
}
