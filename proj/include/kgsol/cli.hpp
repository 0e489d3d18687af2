#pragma once

// Command-line front end. Each subcommand validates everything up front,
// computes in memory and only then writes its files.

#include <iosfwd>
#include <string>
#include <vector>

namespace kgsol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitNonConvergence = 3;

/// "start:stop:count[:log]", a comma list, or a single number. Without a
/// count ("start:stop" or "start:stop:log") 100 points are used.
std::vector<double> parseRange(const std::string& text);

/// Round-trip formatting (17 significant digits); nan/inf spelled out.
std::string formatDouble(double v);

/// Splices the key = value lines of any --config file into the argument
/// list right after the subcommand, so explicit flags (which come later)
/// win. Throws DomainError on unreadable files or malformed lines.
std::vector<std::string> expandConfigFile(const std::vector<std::string>& args,
                                          const std::vector<std::string>& commands);

/// Entry point; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgsol::cli
