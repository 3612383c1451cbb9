#pragma once

#include <string>

#include "decent/cli/config.hpp"

namespace decent::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportSchema = 1;

struct RunOutput {
  Json results;
  std::string csv;  // table written when format is csv
};

// Runs the subcommand. Results depend only on the configuration, never on
// the thread count.
RunOutput execute(const RunConfig& config, unsigned threads);

Json make_report(const RunConfig& config, const Json& results, double wall_time_seconds);

// `path` joined onto DECENT_OUTPUT_DIR when that is set and path is relative.
std::string resolve_output_path(const std::string& path);

}  // namespace decent::cli
