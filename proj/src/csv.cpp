#include "rllink/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rllink/errors.hpp"

namespace rllink {

std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::ostream& os, const std::string& field) {
  if (!needs_quoting(field)) {
    os << field;
    return;
  }
  os << '"';
  for (char c : field) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    write_field(os, row[i]);
  }
  os << '\n';
}

std::vector<std::string> parse_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

void write_table(std::ostream& os, const Table& table, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  write_row(os, table.header);
  for (const auto& row : table.rows) write_row(os, row);
}

void write_table_file(const std::string& path, const Table& table,
                      const std::vector<std::string>& comments) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw NumericError("cannot open '" + path + "' for writing");
  write_table(os, table, comments);
  os.flush();
  if (!os) throw NumericError("write to '" + path + "' failed");
}

Table read_table(std::istream& is) {
  Table table;
  std::string line;
  bool have_header = false;
  auto quote_open = [](const std::string& s) {
    // Doubled quotes keep the parity even, so an odd count means a field
    // continues past the physical line.
    return std::count(s.begin(), s.end(), '"') % 2 != 0;
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::string record = std::move(line);
    while (quote_open(record) && std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      record += '\n';
      record += line;
    }
    auto row = parse_row(record);
    if (!have_header) {
      table.header = std::move(row);
      have_header = true;
    } else {
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Table read_table_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw NumericError("cannot open '" + path + "' for reading");
  return read_table(is);
}

}  // namespace rllink
