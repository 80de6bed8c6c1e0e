#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavelink::cli {

/// Everything one invocation needs. Optional fields fall back to the
/// command's own default (for example 8 levels for wmc, 6 for wcor).
struct RunConfig {
  std::string command;

  // Input.
  std::vector<std::string> inputs;
  std::vector<std::string> columns;
  std::string layout = "wide";
  std::string date_column = "date";
  bool forward_fill = false;
  std::string transform = "none";  // none | returns | abs-returns | abs
  std::string reference;           // wcor/wccor reference series; first when empty
  std::string events;              // optional date,label file for SVG annotations

  // MODWT and statistics.
  std::string filter = "la8";
  std::optional<std::string> boundary;
  std::optional<int> levels;
  std::optional<std::size_t> window;
  std::optional<std::size_t> step;
  double confidence = 0.95;
  int max_lag = 10;

  // Coherence.
  int surrogates = 300;
  std::uint64_t seed = 0;
  double s0 = 2.0;
  double dj = 1.0 / 12.0;
  int n_scales = 0;
  unsigned threads = 0;
  bool per_cell = false;
  int arrow_step = 8;

  // Contagion.
  std::string event;  // ISO date or observation index
  std::size_t pre = 250;
  std::size_t post = 250;

  // Long memory and connectivity.
  std::optional<int> j1;
  std::optional<int> j2;
  double tolerance = 0.1;
  std::size_t clusters = 2;

  // synth-fgn.
  double hurst = 0.7;
  std::size_t n = 4096;
  std::string start_date = "2000-01-03";
  std::string name = "fgn";

  // Output.
  std::string out_dir;
  std::string tag;
};

/// Flat `key = value` lines; '#' starts a comment. Keys may use '-' or '_'.
/// Throws Error(Parse) naming the offending line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

/// Range and consistency checks that need no input data. Throws
/// Error(InvalidArgument).
void validate(const RunConfig& config);

/// Output directory: the flag, else WAVELINK_OUT_DIR, else the working
/// directory.
std::filesystem::path resolve_out_dir(const RunConfig& config);

}  // namespace wavelink::cli
