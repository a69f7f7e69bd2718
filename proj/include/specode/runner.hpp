#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specode {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumeric = 2,
};

/// Outcome of one configured run. `summary` is a JSON document (also written
/// to the output directory when the run succeeds).
struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::string summary;
  std::string error;
};

/// Subcommands accepted by run_command.
const std::vector<std::string>& subcommands();

/// Parses `config_text` (JSON, see README for the schema), runs the named
/// subcommand and writes its outputs under `out_dir` (the config's
/// output.directory when empty). Never throws; failures map to exit codes.
RunResult run_command(const std::string& subcommand, const std::string& config_text,
                      const std::filesystem::path& out_dir = {});

RunResult run_single_channel(const std::string& config_text, const std::filesystem::path& out_dir = {});
RunResult run_sweep(const std::string& config_text, const std::filesystem::path& out_dir = {});
RunResult run_multichannel(const std::string& config_text, const std::filesystem::path& out_dir = {});
RunResult run_dynamics_check(const std::string& config_text, const std::filesystem::path& out_dir = {});

}  // namespace specode
