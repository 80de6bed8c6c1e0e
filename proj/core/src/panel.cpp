#include "wavelink/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "wavelink/error.hpp"

namespace wavelink {
namespace {

struct SparseSeries {
  std::string name;
  std::map<Date, double> obs;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == ',' && !quoted) {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(line.substr(start)));
  return out;
}

bool is_missing_token(std::string_view s) {
  return s.empty() || s == "NA" || s == "N/A" || s == "NaN" || s == "nan" || s == "null" || s == ".";
}

// nullopt for a missing cell; throws for text that is neither missing nor numeric.
std::optional<double> parse_value(std::string_view cell, const std::string& where) {
  if (is_missing_token(cell)) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    fail(ErrorCode::Parse, where + ": cannot parse value '" + std::string(cell) + "'");
  }
  return v;
}

std::size_t find_column(const std::vector<std::string_view>& header, std::string_view name,
                        const std::string& file) {
  auto it = std::find(header.begin(), header.end(), name);
  require(it != header.end(), ErrorCode::Parse,
          file + ": missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<SparseSeries> read_sparse(const std::filesystem::path& path, const CsvFormat& format) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open '" + path.string() + "'");
  const std::string file = path.string();

  std::string header_line;
  require(static_cast<bool>(std::getline(in, header_line)), ErrorCode::Parse, file + ": empty file");
  const std::string header_copy = header_line;
  const auto header = split_csv(header_copy);
  const std::size_t date_col = find_column(header, format.date_column, file);

  std::vector<SparseSeries> out;
  std::vector<std::size_t> cols;
  std::size_t name_col = 0, value_col = 0;
  std::map<std::string, std::size_t, std::less<>> long_index;

  if (format.layout == CsvLayout::Wide) {
    if (format.value_columns.empty()) {
      for (std::size_t c = 0; c < header.size(); ++c)
        if (c != date_col) cols.push_back(c);
    } else {
      for (const auto& name : format.value_columns) cols.push_back(find_column(header, name, file));
    }
    require(!cols.empty(), ErrorCode::Parse, file + ": no value columns");
    for (auto c : cols) out.push_back({std::string(header[c]), {}});
  } else {
    name_col = find_column(header, format.name_column, file);
    value_col = find_column(header, format.value_column, file);
  }

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = file + ":" + std::to_string(line_no);
    require(cells.size() == header.size(), ErrorCode::Parse,
            where + ": expected " + std::to_string(header.size()) + " fields, found " +
                std::to_string(cells.size()));
    Date date;
    try {
      date = parse_date(cells[date_col]);
    } catch (const Error& e) {
      fail(ErrorCode::Parse, where + ": " + e.what());
    }

    auto insert = [&](SparseSeries& s, std::optional<double> v) {
      if (!v) return;
      require(s.obs.emplace(date, *v).second, ErrorCode::Parse,
              where + ": duplicate date " + format_date(date) + " for series '" + s.name + "'");
    };

    if (format.layout == CsvLayout::Wide) {
      for (std::size_t k = 0; k < cols.size(); ++k)
        insert(out[k], parse_value(cells[cols[k]], where));
    } else {
      const std::string name(cells[name_col]);
      require(!name.empty(), ErrorCode::Parse, where + ": empty series name");
      auto [it, added] = long_index.emplace(name, out.size());
      if (added) out.push_back({name, {}});
      insert(out[it->second], parse_value(cells[value_col], where));
    }
  }
  require(!out.empty(), ErrorCode::Parse, file + ": no series found");
  return out;
}

Panel align(std::vector<SparseSeries> series, MissingPolicy missing, std::size_t min_obs) {
  std::set<std::string> seen;
  for (const auto& s : series)
    require(seen.insert(s.name).second, ErrorCode::InvalidArgument,
            "duplicate series name '" + s.name + "'");

  Panel panel;
  std::vector<Date> dates;
  if (missing == MissingPolicy::Intersect) {
    for (const auto& [d, v] : series.front().obs) {
      bool everywhere = std::all_of(series.begin() + 1, series.end(),
                                    [&](const SparseSeries& s) { return s.obs.count(d) > 0; });
      if (everywhere) dates.push_back(d);
    }
  } else {
    std::set<Date> all;
    Date first_common = Date::min();
    for (const auto& s : series) {
      if (s.obs.empty()) continue;
      for (const auto& kv : s.obs) all.insert(kv.first);
      first_common = std::max(first_common, s.obs.begin()->first);
    }
    for (auto d : all)
      if (d >= first_common) dates.push_back(d);
  }

  require(dates.size() >= min_obs, ErrorCode::InsufficientData,
          "only " + std::to_string(dates.size()) + " aligned observations, need at least " +
              std::to_string(min_obs));

  for (auto& s : series) {
    std::vector<double> row;
    row.reserve(dates.size());
    auto it = s.obs.begin();
    double last = 0.0;
    for (auto d : dates) {
      while (it != s.obs.end() && it->first <= d) last = (it++)->second;
      row.push_back(last);
    }
    panel.names.push_back(std::move(s.name));
    panel.values.push_back(std::move(row));
  }
  panel.dates = std::move(dates);
  panel.validate();
  return panel;
}

std::vector<SparseSeries> to_sparse(const Panel& p) {
  std::vector<SparseSeries> out;
  for (std::size_t i = 0; i < p.n_series(); ++i) {
    SparseSeries s{p.names[i], {}};
    for (std::size_t t = 0; t < p.n_obs(); ++t) s.obs.emplace(p.dates[t], p.values[i][t]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

Date parse_date(std::string_view text) {
  text = trim(text);
  int y = 0;
  unsigned m = 0, d = 0;
  auto bad = [&] { fail(ErrorCode::Parse, "invalid date '" + std::string(text) + "'"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad();
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc{} || ptr != text.data() + pos + len) bad();
  };
  num(0, 4, y);
  num(5, 2, m);
  num(8, 2, d);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) bad();
  return Date{ymd};
}

std::string format_date(Date date) {
  std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::size_t Panel::index_of(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  require(it != names.end(), ErrorCode::InvalidArgument, "unknown series '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

void Panel::validate() const {
  require(names.size() == values.size(), ErrorCode::InvalidArgument, "panel: names/values size mismatch");
  for (std::size_t t = 1; t < dates.size(); ++t)
    require(dates[t - 1] < dates[t], ErrorCode::InvalidArgument, "panel: dates not strictly increasing");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(values[i].size() == dates.size(), ErrorCode::InvalidArgument,
            "panel: series '" + names[i] + "' length differs from dates");
    for (double v : values[i])
      require(std::isfinite(v), ErrorCode::InvalidArgument,
              "panel: series '" + names[i] + "' has a non-finite value");
  }
}

Panel load_panel(const std::filesystem::path& path, const CsvFormat& format) {
  return align(read_sparse(path, format), format.missing, format.min_observations);
}

Panel load_panels(std::span<const std::filesystem::path> paths, const CsvFormat& format) {
  require(!paths.empty(), ErrorCode::InvalidArgument, "no input files");
  std::vector<SparseSeries> all;
  for (const auto& p : paths) {
    auto s = read_sparse(p, format);
    std::move(s.begin(), s.end(), std::back_inserter(all));
  }
  return align(std::move(all), format.missing, format.min_observations);
}

Panel merge_panels(std::span<const Panel> panels, MissingPolicy missing, std::size_t min_observations) {
  require(!panels.empty(), ErrorCode::InvalidArgument, "no panels to merge");
  std::vector<SparseSeries> all;
  for (const auto& p : panels) {
    auto s = to_sparse(p);
    std::move(s.begin(), s.end(), std::back_inserter(all));
  }
  return align(std::move(all), missing, min_observations);
}

Panel log_returns(const Panel& prices) {
  require(prices.n_obs() >= 2, ErrorCode::InsufficientData, "log returns need at least 2 observations");
  Panel out;
  out.names = prices.names;
  out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  for (std::size_t i = 0; i < prices.n_series(); ++i) {
    const auto& p = prices.values[i];
    for (std::size_t t = 0; t < p.size(); ++t)
      require(p[t] > 0.0, ErrorCode::InvalidArgument,
              "non-positive price in series '" + prices.names[i] + "' on " + format_date(prices.dates[t]));
    std::vector<double> r(p.size() - 1);
    for (std::size_t t = 1; t < p.size(); ++t) r[t - 1] = std::log(p[t]) - std::log(p[t - 1]);
    out.values.push_back(std::move(r));
  }
  return out;
}

Panel absolute_values(const Panel& panel) {
  Panel out = panel;
  for (auto& row : out.values)
    for (double& v : row) v = std::abs(v);
  return out;
}

Panel select_series(const Panel& panel, std::span<const std::string> names) {
  if (names.empty()) return panel;
  Panel out;
  out.dates = panel.dates;
  for (const auto& n : names) {
    auto i = panel.index_of(n);
    out.names.push_back(panel.names[i]);
    out.values.push_back(panel.values[i]);
  }
  return out;
}

}  // namespace wavelink
