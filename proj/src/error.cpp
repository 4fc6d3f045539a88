#include "scatterfield/error.hpp"

namespace scatterfield {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::degenerate_medium: return "degenerate-medium";
    case ErrorCode::needs_regularization: return "needs-regularization";
    case ErrorCode::kernel_too_large: return "kernel-too-large";
    case ErrorCode::too_large: return "too-large";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::missing_file: return "missing-file";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::unknown_schema: return "unknown-schema";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::invalid_argument, message);
}

}  // namespace scatterfield
