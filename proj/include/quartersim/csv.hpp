#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quartersim::csv {

/// Semicolon-separated table with a header row. No quoting: fields never contain ';' or newlines.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws ImportError naming `source` when absent.
  std::size_t column(std::string_view name, std::string_view source) const;
};

Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

/// Serializes with '\n' line endings; output depends only on the table contents.
std::string to_string(const Table& table);
void write_file(const std::filesystem::path& path, const Table& table);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace quartersim::csv
