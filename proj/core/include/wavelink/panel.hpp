#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavelink {

using Date = std::chrono::sys_days;

/// Parses a calendar date in `YYYY-MM-DD` form. Throws Error(Parse) on
/// malformed or impossible dates.
Date parse_date(std::string_view text);
std::string format_date(Date date);

/// Aligned multi-series matrix of dated observations.
///
/// Rows are series, columns are observations. All rows share `dates`, which
/// are strictly increasing, and every value is finite.
struct Panel {
  std::vector<std::string> names;
  std::vector<Date> dates;
  std::vector<std::vector<double>> values;

  std::size_t n_series() const { return values.size(); }
  std::size_t n_obs() const { return dates.size(); }
  std::span<const double> series(std::size_t i) const { return values.at(i); }
  std::size_t index_of(std::string_view name) const;

  /// Throws if any structural invariant is violated.
  void validate() const;
};

enum class CsvLayout { Wide, Long };
enum class MissingPolicy { Intersect, ForwardFill };

struct CsvFormat {
  CsvLayout layout = CsvLayout::Wide;
  std::string date_column = "date";
  // Wide layout: series columns to keep; empty means every non-date column.
  std::vector<std::string> value_columns;
  // Long layout column names.
  std::string name_column = "name";
  std::string value_column = "value";
  MissingPolicy missing = MissingPolicy::Intersect;
  std::size_t min_observations = 32;
};

Panel load_panel(const std::filesystem::path& path, const CsvFormat& format = {});

/// Loads every file and aligns the union of their series on common dates
/// (or forward-fills under MissingPolicy::ForwardFill).
Panel load_panels(std::span<const std::filesystem::path> paths, const CsvFormat& format = {});

/// Aligns already-loaded panels. Series names must be unique across inputs.
Panel merge_panels(std::span<const Panel> panels, MissingPolicy missing,
                   std::size_t min_observations = 32);

/// r_t = ln(p_t) - ln(p_{t-1}); the first date is dropped.
Panel log_returns(const Panel& prices);

/// Absolute values, the volatility proxy used for long-memory runs.
Panel absolute_values(const Panel& panel);

Panel select_series(const Panel& panel, std::span<const std::string> names);

}  // namespace wavelink
