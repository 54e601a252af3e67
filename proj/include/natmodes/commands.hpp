#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "natmodes/config.hpp"

namespace natmodes {

/// Exit codes shared by the CLI and the command runners.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitUnresolved = 2;

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> written;
  std::string message;
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs one subcommand (modes, spectrum, completeness, census, asymptotics)
/// and writes its CSV/JSON files into out_dir. Library errors propagate;
/// unresolved cells are reported through the exit code with partial output.
CommandOutcome run_command(const std::string& command, const RunConfig& config, const std::filesystem::path& out_dir);

}  // namespace natmodes
