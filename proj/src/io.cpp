#include "commsat/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "commsat/error.hpp"

namespace commsat {

using json = nlohmann::json;

namespace {

void append_clauses(std::string& out, const Formula& f) {
  out += fmt::format("p cnf {} {}\n", f.n, f.m());
  for (const Clause& clause : f.clauses) {
    for (const Literal& l : clause) {
      out += fmt::format("{}", l.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_int(std::string_view token, T& out) {
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string encode_provenance_modes(const std::vector<ClauseProvenance>& prov) {
  std::string s;
  s.reserve(prov.size());
  for (const auto& p : prov) s += p.mode == SelectionMode::Intra ? 'i' : 'e';
  return s;
}

std::string encode_provenance_types(const std::vector<ClauseProvenance>& prov) {
  std::string s;
  s.reserve(prov.size());
  for (const auto& p : prov) s += char('0' + p.type);
  return s;
}

json solution_json(const Assignment& a) {
  json arr = json::array();
  for (Var v = 1; v <= a.size(); ++v) arr.push_back(a.value(v) ? std::int64_t(v) : -std::int64_t(v));
  return arr;
}

Assignment solution_from_json(const json& arr) {
  Assignment a(static_cast<Var>(arr.size()), false);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto code = arr[i].get<std::int64_t>();
    const Var v = static_cast<Var>(code < 0 ? -code : code);
    if (v != i + 1) fail(ErrorKind::Parse, fmt::format("solution entry {} names variable {}", i, v));
    a.set(v, code > 0);
  }
  return a;
}

}  // namespace

std::string write_dimacs(const Formula& f) {
  std::string out;
  append_clauses(out, f);
  return out;
}

std::string write_dimacs(const GeneratedInstance& inst, bool include_solution_comment) {
  const auto& p = inst.params;
  std::string out;
  out += fmt::format("c commsat {} planted 3-SAT instance\n", kVersion);
  out += fmt::format("c params p={} alpha={} c={} p1={} p2={} p3={} beta={} r={} n={} m={}\n", p.p, p.alpha, p.c,
                     p.dist.p1, p.dist.p2, p.dist.p3, beta_of(p.dist), p.r, p.n, inst.formula.m());
  out += fmt::format("c seed master={} derived={} index={}\n", inst.master_seed, p.seed, inst.index);
  if (include_solution_comment) {
    out += "c solution";
    for (Var v = 1; v <= inst.solution.size(); ++v)
      out += fmt::format(" {}", inst.solution.value(v) ? std::int64_t(v) : -std::int64_t(v));
    out += '\n';
  }
  append_clauses(out, inst.formula);
  return out;
}

DimacsDocument read_dimacs(std::string_view text) {
  DimacsDocument doc;
  bool have_header = false;
  std::size_t declared_m = 0;
  std::vector<Literal> pending;
  std::size_t line_no = 0, pending_line = 0;

  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == '%') break;
    if (line[0] == 'p') {
      const auto tok = tokens(line);
      if (have_header) throw ParseError(line_no, "duplicate problem line");
      if (tok.size() != 4 || tok[0] != "p" || tok[1] != "cnf" || !parse_int(tok[2], doc.formula.n) ||
          !parse_int(tok[3], declared_m))
        throw ParseError(line_no, fmt::format("malformed header '{}'", line));
      have_header = true;
      doc.formula.clauses.reserve(declared_m);
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before 'p cnf' header");

    for (std::string_view tok : tokens(line)) {
      std::int64_t code = 0;
      if (!parse_int(tok, code)) throw ParseError(line_no, fmt::format("bad literal '{}'", tok));
      if (code == 0) {
        Clause clause(std::move(pending));
        pending = {};
        if (!clause.is_three_sat()) doc.non_three_sat = true;
        doc.formula.clauses.push_back(std::move(clause));
        continue;
      }
      const std::uint64_t var = code < 0 ? std::uint64_t(-code) : std::uint64_t(code);
      if (var > doc.formula.n)
        throw ParseError(line_no, fmt::format("literal {} exceeds declared variable count {}", code, doc.formula.n));
      if (pending.empty()) pending_line = line_no;
      pending.push_back(Literal::from_dimacs(code));
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "clause missing terminating 0");
  if (doc.formula.m() != declared_m)
    throw ParseError(line_no, fmt::format("header declares {} clauses, found {}", declared_m, doc.formula.m()));
  return doc;
}

InstanceMetadata metadata_of(const GeneratedInstance& inst, bool include_solution) {
  InstanceMetadata meta;
  meta.generator_version = fmt::format("commsat {}", kVersion);
  meta.params = inst.params;
  meta.master_seed = inst.master_seed;
  meta.derived_seed = inst.params.seed;
  meta.index = inst.index;
  meta.partition = inst.partition;
  if (include_solution) meta.solution = inst.solution;
  else meta.params.solution.reset();
  meta.provenance = inst.provenance;
  return meta;
}

std::string write_metadata(const InstanceMetadata& meta) {
  const auto& p = meta.params;
  json doc;
  doc["schema"] = kMetadataSchemaName;
  doc["schema_version"] = kMetadataSchemaVersion;
  doc["generator_version"] = meta.generator_version;
  doc["params"] = {{"p", p.p},
                   {"alpha", p.alpha},
                   {"c", p.c},
                   {"p1", p.dist.p1},
                   {"p2", p.dist.p2},
                   {"p3", p.dist.p3},
                   {"beta", beta_of(p.dist)},
                   {"r", p.r},
                   {"n", p.n},
                   {"m", p.m()},
                   {"no_duplicate_clauses", p.no_duplicate_clauses},
                   {"fixed_solution", p.solution.has_value()}};
  doc["master_seed"] = meta.master_seed;
  doc["derived_seed"] = meta.derived_seed;
  doc["index"] = meta.index;

  json home = json::array(), memberships = json::array();
  for (Var v = 1; v <= meta.partition.n(); ++v) {
    home.push_back(meta.partition.home[v]);
    memberships.push_back(meta.partition.v_to_cs[v]);
  }
  doc["partition"] = {{"c", meta.partition.c()}, {"home", home}, {"memberships", memberships}};
  if (meta.solution) doc["solution"] = solution_json(*meta.solution);
  doc["provenance"] = {{"selection", encode_provenance_modes(meta.provenance)},
                       {"types", encode_provenance_types(meta.provenance)}};
  return doc.dump(2) + "\n";
}

std::string write_metadata(const GeneratedInstance& inst, bool include_solution) {
  return write_metadata(metadata_of(inst, include_solution));
}

InstanceMetadata read_metadata(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, fmt::format("metadata is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object() || doc.value("schema", "") != kMetadataSchemaName)
    fail(ErrorKind::SchemaVersion, "document is not commsat instance metadata");
  const int version = doc.value("schema_version", -1);
  if (version != kMetadataSchemaVersion)
    fail(ErrorKind::SchemaVersion,
         fmt::format("metadata schema version {} is not supported (expected {})", version, kMetadataSchemaVersion));

  try {
    InstanceMetadata meta;
    meta.generator_version = doc.at("generator_version").get<std::string>();
    const json& p = doc.at("params");
    meta.params.p = p.at("p").get<double>();
    meta.params.alpha = p.at("alpha").get<double>();
    meta.params.c = p.at("c").get<Community>();
    meta.params.dist = {p.at("p1").get<double>(), p.at("p2").get<double>(), p.at("p3").get<double>()};
    meta.params.dist.validate();
    meta.params.r = p.at("r").get<double>();
    meta.params.n = p.at("n").get<Var>();
    meta.params.no_duplicate_clauses = p.at("no_duplicate_clauses").get<bool>();
    meta.master_seed = doc.at("master_seed").get<std::uint64_t>();
    meta.derived_seed = doc.at("derived_seed").get<std::uint64_t>();
    meta.params.seed = meta.derived_seed;
    meta.index = doc.at("index").get<std::size_t>();

    const json& part = doc.at("partition");
    const auto home = part.at("home").get<std::vector<Community>>();
    const auto memberships = part.at("memberships").get<std::vector<std::vector<Community>>>();
    const Community c = part.at("c").get<Community>();
    if (home.size() != memberships.size()) fail(ErrorKind::Parse, "partition home/memberships length mismatch");
    meta.partition = CommunityPartition::empty(static_cast<Var>(home.size()), c);
    for (std::size_t i = 0; i < home.size(); ++i) {
      const Var v = static_cast<Var>(i + 1);
      meta.partition.home[v] = home[i];
      for (Community k : memberships[i]) {
        if (k < 1 || k > c) fail(ErrorKind::Parse, fmt::format("variable {} lists community {} outside 1..{}", v, k, c));
        meta.partition.add(v, k);
      }
    }

    if (doc.contains("solution")) meta.solution = solution_from_json(doc.at("solution"));
    if (p.at("fixed_solution").get<bool>() && meta.solution) meta.params.solution = meta.solution;

    const auto modes = doc.at("provenance").at("selection").get<std::string>();
    const auto types = doc.at("provenance").at("types").get<std::string>();
    if (modes.size() != types.size()) fail(ErrorKind::Parse, "provenance selection/types length mismatch");
    meta.provenance.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if ((modes[i] != 'i' && modes[i] != 'e') || types[i] < '1' || types[i] > '3')
        fail(ErrorKind::Parse, fmt::format("bad provenance entry {}", i));
      meta.provenance.push_back({modes[i] == 'i' ? SelectionMode::Intra : SelectionMode::Inter, types[i] - '0'});
    }
    return meta;
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, fmt::format("metadata field error: {}", e.what()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) fail(ErrorKind::Io, fmt::format("short write to '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace commsat
