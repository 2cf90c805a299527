#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace convbrowse {

/// A header row plus data rows of a delimiter-separated text table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads delimiter-separated values. Fields may be double-quoted, with ""
/// as an escaped quote; quoted fields may span lines. Blank lines are
/// skipped. A UTF-8 byte order mark on the first line is dropped.
Table read_table(std::istream& in, char separator);

/// Writes one row, quoting fields that contain the separator, a quote or
/// a line break.
void write_row(std::ostream& out, const std::vector<std::string>& fields, char separator);

/// Parses `key = value` lines; `#` starts a comment line. Keys are
/// lower-cased, keys and values trimmed. Throws ConfigurationError on a
/// line without '='.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

}  // namespace convbrowse
