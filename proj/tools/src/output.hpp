#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wavelink::cli {

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite.
std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);

/// Row-oriented CSV builder. Cells are quoted only when they need it.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t n_rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// In-memory output files, written only after every computation succeeded.
class Artifacts {
 public:
  Artifacts(std::string command, std::string tag);

  void add(std::string_view extension, std::string content);

  /// Writes each file to a temporary sibling and renames it into place.
  /// Returns the final paths.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;

  const std::string& tag() const { return tag_; }

 private:
  struct File {
    std::string name;
    std::string content;
  };
  std::string command_;
  std::string tag_;
  std::vector<File> files_;
};

/// UTC wall-clock stamp like 20240131T235959Z, the default output tag.
std::string timestamp_tag();

}  // namespace wavelink::cli
