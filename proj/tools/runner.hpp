#pragma once

#include <string>

#include "experiment_config.hpp"

namespace rieszlab::cli {

/// Executes one subcommand against the effective config, writing results.json
/// plus tables/*.csv and a run-manifest.json into the output directory.
/// Returns the process exit code: 0 success, 2 pipeline failure (stage named
/// on stderr). Config errors throw before this is reached (exit 1).
int run_command(const std::string& command, const ExperimentConfig& cfg);

}  // namespace rieszlab::cli
