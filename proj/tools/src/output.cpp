#include "output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "wavelink/error.hpp"

namespace wavelink::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& value) { return value ? format_number(*value) : "NA"; }

namespace {

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote_if_needed(cells[i]);
  }
  out += '\n';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), ErrorCode::InvalidArgument, "CSV row width does not match header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) append_line(out, r);
  return out;
}

Artifacts::Artifacts(std::string command, std::string tag) : command_(std::move(command)), tag_(std::move(tag)) {}

void Artifacts::add(std::string_view extension, std::string content) {
  files_.push_back({command_ + "-" + tag_ + "." + std::string(extension), std::move(content)});
}

std::vector<std::filesystem::path> Artifacts::commit(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec && std::filesystem::is_directory(dir), ErrorCode::Io,
          "cannot create output directory " + dir.string());
  std::vector<std::filesystem::path> written;
  for (const auto& f : files_) {
    const auto final_path = dir / f.name;
    auto tmp = final_path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
      out.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
      out.close();
      require(!out.fail(), ErrorCode::Io, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      fail(ErrorCode::Io, "cannot move output into place at " + final_path.string());
    }
    written.push_back(final_path);
  }
  return written;
}

std::string timestamp_tag() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const auto day = std::chrono::floor<std::chrono::days>(now);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{now - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02d%02d%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace wavelink::cli
