#include "commsat/error.hpp"

#include <fmt/format.h>

namespace commsat {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameters: return "invalid-parameters";
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::CommunityTooSmall: return "community-too-small";
    case ErrorKind::InfeasibleSelection: return "infeasible-selection";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::SchemaVersion: return "schema-version";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(fmt::format("{}: {}", to_string(kind), what)), kind_(kind) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::Parse, fmt::format("line {}: {}", line, what)), line_(line) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace commsat
