#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "locforge/io.hpp"

namespace locforge {

struct CommandOptions {
  Budget budget;
  OracleMode oracle = OracleMode::automatic;
  bool timing = false;                  // adds timing_ms; reports are then no longer reproducible
  std::filesystem::path out_dir;        // gen
  std::uint64_t seed = 0;               // gen; 0 = LOCALE_FORGE_SEED or the default
  std::size_t count = 20;               // gen: random presentations after the corpus
};

struct CommandResult {
  int exit_code = 0;        // 0 pass, 1 fail / inapplicable, 2 malformed input, 3 budget exceeded
  json report;              // null when the input was malformed
  std::string text;         // raw output (export-dot)
  std::string diagnostics;  // for standard error
};

const std::vector<std::string>& command_names();
CommandResult run_command(const std::string& command, const std::vector<Document>& inputs, const CommandOptions& opts);
std::string render_text(const json& report);

}  // namespace locforge
