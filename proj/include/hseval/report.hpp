#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hseval/metrics.hpp"

namespace hseval {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportFormatVersion = 1;
inline constexpr int kInputFormatVersion = 1;

/// Deterministic, diff-friendly evaluation report.
///
/// Layout:
///   # hseval report
///   [header]          key = value, sorted
///   [results]         key = value, in insertion order
///   [table <name>]    one comma-separated table per section
///   [warnings]        one "- text" line each
struct Report {
  struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
  };

  std::string command;
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<Table> tables;
  std::vector<std::string> warnings;

  Table& add_table(std::string name, std::vector<std::string> columns);
  const Table* table(const std::string& name) const;
  const std::string* result(const std::string& key) const;

  std::string render() const;
  /// Writes `<dir>/<table>.csv` for every table.
  void write_tables(const std::filesystem::path& dir) const;
};

/// Report number formatting: 12 significant digits.
std::string report_number(double value);
/// As report_number, or the token `undefined`.
std::string report_number(const Rate& value);

}  // namespace hseval
