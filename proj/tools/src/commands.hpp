#pragma once

#include <string_view>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace wavelink::cli {

/// Subcommand names in help order.
const std::vector<std::string_view>& command_names();

/// Runs one validated command entirely in memory. Nothing touches the file
/// system except reading inputs; the caller commits the artifacts.
Artifacts execute(const RunConfig& config);

}  // namespace wavelink::cli
