#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace commsat {

enum class ErrorKind {
  InvalidParameters,
  Domain,
  CommunityTooSmall,
  InfeasibleSelection,
  Parse,
  SchemaVersion,
  TooLarge,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the DIMACS reader; carries the 1-based line of the offending input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace commsat
