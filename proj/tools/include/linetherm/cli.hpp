#pragma once

#include <ostream>
#include <string>
#include <vector>

/// Command-line front end. `run` is the whole program minus process exit,
/// so that tests can drive it in-process.
namespace linetherm::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;  // bad arguments, files or physical inputs
inline constexpr int kExitNumerical = 3;   // a fit or inversion failed

/// Environment variable naming the default SystemParams JSON file.
inline constexpr const char* kSystemParamsEnv = "LINETHERM_SYSTEM_PARAMS";

/// Runs the tool with `args` (args[0] is the program name). Reports go to
/// `out` (or the file named by --output), errors to `err` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Version of the tool embedded in every run manifest.
const char* tool_version() noexcept;

}  // namespace linetherm::cli
