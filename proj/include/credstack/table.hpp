// Copyright 2026 The credstack Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace credstack {

struct Missing {
  bool operator==(const Missing&) const = default;
};

using Cell = std::variant<Missing, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<Missing>(c); }
inline bool is_number(const Cell& c) { return std::holds_alternative<double>(c); }
inline bool is_text(const Cell& c) { return std::holds_alternative<std::string>(c); }

// Column-major table of raw cells. Column names are unique and non-empty,
// and every column holds exactly row_count() cells.
class Table {
 public:
  Table() = default;
  Table(std::vector<std::string> column_names, std::vector<std::vector<Cell>> columns);
  // Zero-column tables still carry a row count.
  Table(std::vector<std::string> column_names, std::vector<std::vector<Cell>> columns,
        std::size_t row_count);

  const std::vector<std::string>& column_names() const { return names_; }
  std::size_t column_count() const { return names_.size(); }
  std::size_t row_count() const { return rows_; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  // Throws DataError("unknown column 'name'").
  std::size_t column_index(std::string_view name) const;

  const std::vector<Cell>& column(std::size_t i) const { return columns_[i]; }
  const std::vector<Cell>& column(std::string_view name) const { return columns_[column_index(name)]; }

  Table with_column(std::size_t i, std::vector<Cell> cells) const;
  Table select_columns(const std::vector<std::size_t>& indices) const;

  bool operator==(const Table&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Cell>> columns_;
  std::size_t rows_ = 0;
};

// RFC-4180 style: header row, comma delimiter, double-quote quoting with ""
// escapes, LF or CRLF line ends. Empty unquoted fields become Missing; every
// other field is Text. A leading UTF-8 BOM is dropped.
Table parse_csv(std::string_view text);

// Inverse of parse_csv for tables without newline-bearing fields. Numbers
// are written in shortest round-trip form, Missing as an empty field, and
// empty Text as "".
std::string serialize_csv(const Table& table);

// Shortest decimal string that parses back to exactly the same double.
std::string format_number(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace credstack
