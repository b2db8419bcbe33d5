#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dmbgn {

/// Comma-separated table with a mandatory header row. Fields are plain
/// tokens; quoting and embedded commas are out of scope for this pipeline.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; missing column -> DataError naming the file.
  std::size_t col(const std::string& name) const;

  std::string source;  // path, for error messages
};

CsvTable read_csv(const std::string& path);

/// Verifies every required column exists; throws DataError listing what is
/// missing from which file.
void require_columns(const CsvTable& table, const std::vector<std::string>& required);

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace dmbgn
