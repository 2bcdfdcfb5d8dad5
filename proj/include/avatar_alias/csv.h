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

// Small CSV and number-formatting helpers shared by the file formats.
// Quoted fields follow RFC 4180 (doubled quotes, embedded commas); embedded
// newlines are not supported.

#ifndef AVATAR_ALIAS_CSV_H_
#define AVATAR_ALIAS_CSV_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace avatar_alias {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error messages.
  std::vector<std::size_t> lines;

  // Index of `column` in the header; throws InputError if absent.
  std::size_t Column(std::string_view column) const;
};

// Reads a whole CSV stream. The first non-empty line is the header. Every
// row must have as many fields as the header.
CsvTable ReadCsv(std::istream& in, std::string_view source_name);

// Throws InputError unless `table.header` starts with `columns` in order.
void RequireColumns(const CsvTable& table, const std::vector<std::string>& columns,
                    std::string_view source_name);

std::vector<std::string> SplitCsvLine(std::string_view line);
std::string CsvField(std::string_view value);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value);
// Fixed number of significant digits ("%.Ng").
std::string FormatDouble(double value, int significant_digits);

double ParseDouble(std::string_view text, std::string_view what);
std::int64_t ParseInt(std::string_view text, std::string_view what);

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_CSV_H_
