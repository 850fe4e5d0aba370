#include "scholarmetrics/error.hpp"

namespace scholarmetrics {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::InvalidDistribution: return "invalid-distribution";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::SchemaError: return "schema-error";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::TransientError: return "transient-error";
    case ErrorKind::PreconditionError: return "precondition-error";
    case ErrorKind::ConfigError: return "config-error";
    case ErrorKind::IoError: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(std::size_t offset, const std::string& message)
    : Error(ErrorKind::ParseError, message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

SchemaError::SchemaError(std::string field_path, const std::string& message)
    : Error(ErrorKind::SchemaError, field_path + ": " + message),
      field_path_(std::move(field_path)) {}

}  // namespace scholarmetrics
