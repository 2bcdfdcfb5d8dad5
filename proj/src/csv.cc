// Copyright 2026 The Avatar Alias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avatar_alias/csv.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "avatar_alias/errors.h"

namespace avatar_alias {

std::size_t CsvTable::Column(std::string_view column) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) return i;
  }
  throw InputError("missing CSV column '" + std::string(column) + "'");
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw InputError("unterminated quoted CSV field");
  fields.push_back(std::move(current));
  return fields;
}

CsvTable ReadCsv(std::istream& in, std::string_view source_name) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = SplitCsvLine(line);
    } catch (const InputError& e) {
      throw InputError(std::string(source_name) + ":" + std::to_string(line_no) +
                       ": " + e.what());
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InputError(std::string(source_name) + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(table.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.lines.push_back(line_no);
  }
  if (!have_header) {
    throw InputError(std::string(source_name) + ": empty CSV (no header)");
  }
  return table;
}

void RequireColumns(const CsvTable& table, const std::vector<std::string>& columns,
                    std::string_view source_name) {
  bool ok = table.header.size() >= columns.size();
  for (std::size_t i = 0; ok && i < columns.size(); ++i) {
    ok = table.header[i] == columns[i];
  }
  if (!ok) {
    std::string expected;
    for (const auto& c : columns) expected += (expected.empty() ? "" : ",") + c;
    throw InputError(std::string(source_name) + ": header must start with '" +
                     expected + "'");
  }
}

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(value);
  }
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvField(fields[i]);
  }
  out << '\n';
}

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw InputError("cannot format number");
  return std::string(buffer, end);
}

std::string FormatDouble(double value, int significant_digits) {
  if (value == 0.0) return "0";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value);
  return buffer;
}

double ParseDouble(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const char* begin = text.data();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("invalid number for " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return value;
}

std::int64_t ParseInt(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  std::int64_t value = 0;
  const char* begin = text.data();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("invalid integer for " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return value;
}

}  // namespace avatar_alias
