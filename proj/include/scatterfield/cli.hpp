#pragma once

#include <ostream>

#include "scatterfield/error.hpp"

namespace scatterfield::cli {

/// Process exit status for a failure category. Usage errors map to 2.
int exit_code(ErrorCode code);
inline constexpr int kUsageExit = 2;
inline constexpr int kInternalExit = 1;

/// Entry point of the `scatterfield` tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scatterfield::cli
