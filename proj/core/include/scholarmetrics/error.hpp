#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scholarmetrics {

enum class ErrorKind {
  InvalidArgument,
  InsufficientData,
  InvalidDistribution,
  ParseError,
  SchemaError,
  NotFound,
  TransientError,
  PreconditionError,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure the library reports. The kind is what
/// callers (and the CLI's exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input document; `offset` is the byte position the parser stopped at.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Provider payload that does not match the expected shape.
class SchemaError : public Error {
 public:
  SchemaError(std::string field_path, const std::string& message);

  const std::string& field_path() const noexcept { return field_path_; }

 private:
  std::string field_path_;
};

}  // namespace scholarmetrics
