#include "hseval/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "hseval/error.hpp"

namespace hseval {

std::string report_number(double value) {
  std::string s = fmt::format("{:.12g}", value);
  return s == "-0" ? "0" : s;
}

std::string report_number(const Rate& value) {
  return value ? report_number(*value) : "undefined";
}

Report::Table& Report::add_table(std::string name,
                                 std::vector<std::string> columns) {
  tables.push_back({std::move(name), std::move(columns), {}});
  return tables.back();
}

const Report::Table* Report::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const std::string* Report::result(const std::string& key) const {
  for (const auto& [k, v] : results) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

std::string Report::render() const {
  std::ostringstream out;
  out << "# hseval report\n[header]\n";
  auto sorted = header;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [k, v] : sorted) out << k << " = " << v << '\n';
  if (!results.empty()) {
    out << "\n[results]\n";
    for (const auto& [k, v] : results) out << k << " = " << v << '\n';
  }
  for (const auto& t : tables) {
    out << "\n[table " << t.name << "]\n";
    write_row(out, t.columns);
    for (const auto& row : t.rows) write_row(out, row);
  }
  out << "\n[warnings]\n";
  for (const auto& w : warnings) out << "- " << w << '\n';
  return out.str();
}

void Report::write_tables(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& t : tables) {
    const auto path = dir / (t.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_row(out, t.columns);
    for (const auto& row : t.rows) write_row(out, row);
  }
}

}  // namespace hseval
