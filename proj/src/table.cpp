#include "convbrowse/table.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include "convbrowse/errors.hpp"

namespace convbrowse {

namespace {

bool all_blank(const std::vector<std::string>& row) {
  for (const auto& field : row) {
    if (field.find_first_not_of(" \t\r") != std::string::npos) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Table read_table(std::istream& in, char separator) {
  Table table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool first = true;
  bool row_has_content = false;

  auto finish_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (row_has_content && !all_blank(row)) {
      if (table.header.empty()) {
        table.header = std::move(row);
      } else {
        table.rows.push_back(std::move(row));
      }
    }
    row.clear();
    row_has_content = false;
  };

  char c;
  while (in.get(c)) {
    if (first) {
      first = false;
      if (c == '\xEF') {
        char b1, b2;
        if (in.get(b1) && in.get(b2) && b1 == '\xBB' && b2 == '\xBF') continue;
        throw ConfigurationError("table starts with a malformed byte order mark");
      }
    }
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      row_has_content = true;
    } else if (c == separator) {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\n') {
      finish_row();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      finish_row();
    } else {
      field.push_back(c);
      row_has_content = true;
    }
  }
  if (in_quotes) throw ConfigurationError("table ends inside a quoted field");
  if (row_has_content || !field.empty()) finish_row();
  return table;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char separator) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << separator;
    const auto& f = fields[i];
    if (f.find_first_of(std::string{separator, '"', '\n', '\r'}) == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(std::string_view(content).substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    out.emplace_back(std::move(key), trim(std::string_view(content).substr(eq + 1)));
  }
  return out;
}

}  // namespace convbrowse
