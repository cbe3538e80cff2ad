#pragma once

#include <string>

#include "CLI11.hpp"

namespace potd::cli {

/// Applies a key = value config file on top of the already parsed command
/// line: every key names a long option (without dashes) of `app` or of the
/// selected subcommand, and its value replaces whatever the flags said.
/// [section] headers naming the subcommand are accepted. Unknown keys throw
/// CLI::ConfigError.
void apply_config_overrides(CLI::App& app, CLI::App* command, const std::string& path);

}  // namespace potd::cli
