#pragma once
// Mode dispatch for the command-line tool. Every run writes into
// config.output: summary.json (schema below), and per mode diagnostics.csv
// and snapshots/. Failures write error.json instead of summary.json.

#include "monopole/config.hpp"

namespace monopole {

inline constexpr int kSummarySchemaVersion = 1;

// Exit status: 0 when every gate passes, 1 when a gate fails, 2 on error.
int run(const RunConfig& config);

// Writes error.json for an error raised outside run() (e.g. config loading).
void write_error(const std::filesystem::path& dir, std::string_view kind, std::string_view message);

}  // namespace monopole
