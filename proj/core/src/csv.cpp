#include "dmbgn/csv.hpp"

#include <fstream>
#include <sstream>

#include "dmbgn/common.hpp"

namespace dmbgn {

namespace {
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

std::size_t CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DataError(source + ": missing required column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  CsvTable table;
  table.source = path;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file, header required");
  table.columns = split_fields(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.rows.push_back(split_fields(line));
  }
  return table;
}

void require_columns(const CsvTable& table, const std::vector<std::string>& required) {
  std::string missing;
  for (const auto& name : required) {
    bool found = false;
    for (const auto& c : table.columns) {
      if (c == name) {
        found = true;
        break;
      }
    }
    if (!found) missing += missing.empty() ? name : ", " + name;
  }
  if (!missing.empty()) {
    throw DataError(table.source + ": missing required column(s): " + missing);
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace dmbgn
