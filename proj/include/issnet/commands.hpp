#pragma once

// Subcommands of the issnet tool. Each writes <command>.txt (human readable)
// and <command>.tsv (section, key, value records) into the output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "issnet/config.hpp"

namespace issnet {

enum class Command { Analyze, Certify, GraphCheck, Simulate, FullReport };

std::string to_string(Command c);
/// Throws std::invalid_argument for an unknown name.
Command parse_command(const std::string& name);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  std::optional<std::size_t> n_max;  // overrides [analysis] n_max
};

// Exit statuses.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct CommandOutcome {
  int exit_code = kExitFail;
  std::vector<std::filesystem::path> files;  // written, in order
  std::string summary;                       // one line per section
};

/// Throws ConfigError when the config lacks what the command needs.
CommandOutcome run_command(Command cmd, const AnalysisConfig& cfg, const RunOptions& opts);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace issnet
