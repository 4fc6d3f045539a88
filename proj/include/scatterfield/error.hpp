#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scatterfield {

enum class ErrorCode {
  invalid_argument,
  degenerate_medium,
  needs_regularization,
  kernel_too_large,
  too_large,
  io_error,
  missing_file,
  dimension_mismatch,
  unknown_schema,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a category, so the CLI can map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

// Throws invalid_argument unless `condition` holds.
void require(bool condition, const std::string& message);

}  // namespace scatterfield
