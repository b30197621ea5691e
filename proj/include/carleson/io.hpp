#pragma once

// Files: point lists as CSV (2n reals per row: re_1, im_1, ..., re_n, im_n),
// JSON documents with line-anchored parse errors, and plain CSV tables.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/point.hpp"

namespace carleson {

/// Blank lines and lines starting with '#' are skipped, as is a first line
/// that does not parse as numbers. Throws ValidationError with "file:line".
std::vector<Point> read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, const std::vector<Point>& pts);

/// Throws ValidationError "file:line:column: message" on malformed JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Line number (1-based) of a byte offset in `text`.
std::size_t line_of_offset(const std::string& text, std::size_t offset);

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace carleson
