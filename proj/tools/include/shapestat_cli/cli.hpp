#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace shapestat::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

/// Runs one command line. `args` excludes the program name. Reports go to
/// `out` (or to the --json target), structured errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Relative paths missing from the working directory are looked up under
/// $SHAPESTAT_DATA_DIR when that variable is set.
std::filesystem::path resolve_input(const std::filesystem::path& path);

}  // namespace shapestat::cli
