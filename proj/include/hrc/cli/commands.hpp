#pragma once

#include <iosfwd>
#include <string_view>

namespace hrc::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kConfigError = 2 };

/// Entry point of the hrcsim tool: simulate, metrics, stats, report.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrc::cli
