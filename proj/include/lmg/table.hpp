#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace lmg {

using Cell = std::variant<long long, double, std::string>;

/// CSV table with '#'-prefixed provenance lines. Doubles are written with 17
/// significant digits so every value round-trips.
struct OutputTable {
  std::vector<std::string> header;  // without the leading '#'
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument if the row width differs from columns.
  void add_row(std::vector<Cell> row);
};

std::string format_cell(const Cell& cell);

/// Full file contents: header lines, column row, data rows; LF endings.
std::string render(const OutputTable& table);

/// Throws IoError if the file cannot be written.
void write_table(const OutputTable& table, const std::filesystem::path& path);

}  // namespace lmg
