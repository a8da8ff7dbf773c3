#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "commsat/generator.hpp"
#include "commsat/model.hpp"
#include "commsat/partition.hpp"

namespace commsat {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr int kMetadataSchemaVersion = 1;
inline constexpr std::string_view kMetadataSchemaName = "commsat.instance-metadata";

/// DIMACS text: `c` comment lines echoing the parameters, the `p cnf n m`
/// header, then one zero-terminated clause per line. The planted solution
/// is written as a `c solution` comment only when requested.
std::string write_dimacs(const GeneratedInstance& inst, bool include_solution_comment = false);
std::string write_dimacs(const Formula& f);

struct DimacsDocument {
  Formula formula;
  /// Set when some clause does not have exactly three distinct variables.
  bool non_three_sat = false;
};

/// Parses DIMACS CNF. Comments may appear anywhere; a `%` line ends the
/// input. Throws ParseError carrying the offending line number.
DimacsDocument read_dimacs(std::string_view text);

struct InstanceMetadata {
  std::string generator_version;
  GeneratorParams params;  ///< `solution` is set only when the caller fixed it
  std::uint64_t master_seed = 0;
  std::uint64_t derived_seed = 0;
  std::size_t index = 0;
  CommunityPartition partition;
  std::optional<Assignment> solution;
  std::vector<ClauseProvenance> provenance;

  friend bool operator==(const InstanceMetadata&, const InstanceMetadata&) = default;
};

InstanceMetadata metadata_of(const GeneratedInstance& inst, bool include_solution = true);
std::string write_metadata(const InstanceMetadata& meta);
std::string write_metadata(const GeneratedInstance& inst, bool include_solution = true);
/// Throws SchemaVersion on a foreign or newer document, Parse on malformed content.
InstanceMetadata read_metadata(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace commsat
