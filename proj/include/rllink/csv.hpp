#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rllink {

// A header row plus data rows, all cells as text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

// 12 significant digits, the project-wide numeric text format.
std::string fmt_g12(double v);

// FNV-1a, used to stamp outputs with a config fingerprint.
uint64_t fnv1a64(std::string_view s);

// CSV with minimal RFC-4180 quoting (fields holding comma, quote, or
// newline). Comment lines are written with a leading '#' and skipped by the
// reader, as are blank lines.
void write_table(std::ostream& os, const Table& table, const std::vector<std::string>& comments);
void write_table_file(const std::string& path, const Table& table,
                      const std::vector<std::string>& comments);
Table read_table(std::istream& is);
Table read_table_file(const std::string& path);

}  // namespace rllink
