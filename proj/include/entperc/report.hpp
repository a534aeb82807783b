#pragma once

// Tabular results with run metadata, written as CSV (metadata in leading
// '#' lines) or JSON ({"meta": ..., "rows": [...]}). Output carries no
// timestamp, so identical inputs give identical bytes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace entperc {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::logic_error when the row width does not match.
  void add_row(std::vector<Cell> row);
};

struct RunMetadata {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;  // in output order
};

/// Shortest decimal that round-trips.
std::string format_double(double v);
std::string format_cell(const Cell& cell);

void write_csv(std::ostream& out, const RunMetadata& meta, const Table& table);
void write_json(std::ostream& out, const RunMetadata& meta, const Table& table);

}  // namespace entperc
