#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace ptoric::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
  kExitCertificateFalse = 4,
};

struct CommandResult {
  int exit_code = kExitPass;
  nlohmann::json report;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-structure", "build-torus",
                                                 "verify-lagrangian", "classify-loop",
                                                 "displace", "equivalence"};
  return names;
}

/// Validates the config for `command` and runs it, writing outputs into out_dir.
/// Throws InvalidArgument on config errors and NumericalFailure on numerical ones.
CommandResult execute(const std::string& command, nlohmann::json config,
                      const std::filesystem::path& out_dir, bool plots);

/// Full command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptoric::cli
