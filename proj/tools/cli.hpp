#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace emw::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, domain_violation = 1, io_usage = 2, numerical_failure = 3 };

/// Runs one command line (args excludes the program name). Output goes to out,
/// diagnostics to err; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emw::cli
