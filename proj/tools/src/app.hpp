#pragma once

#include <ostream>

namespace wavelink::cli {

/// Parses arguments, runs one subcommand and writes its artifacts. Returns
/// the process exit status; failures print one `error code=... msg=...` line
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wavelink::cli
