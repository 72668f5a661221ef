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

#include "credstack/table.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "credstack/error.hpp"

namespace credstack {

Table::Table(std::vector<std::string> column_names, std::vector<std::vector<Cell>> columns)
    : Table(std::move(column_names), std::move(columns), 0) {}

Table::Table(std::vector<std::string> column_names, std::vector<std::vector<Cell>> columns,
             std::size_t row_count)
    : names_(std::move(column_names)), columns_(std::move(columns)), rows_(row_count) {
  if (names_.size() != columns_.size())
    throw DataError("table: " + std::to_string(names_.size()) + " names for " +
                    std::to_string(columns_.size()) + " columns");
  if (!columns_.empty()) rows_ = columns_.front().size();
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw DataError("table: column " + std::to_string(i) + " has an empty name");
    if (!seen.insert(names_[i]).second) throw DataError("table: duplicate column name '" + names_[i] + "'");
    if (columns_[i].size() != rows_)
      throw DataError("table: column '" + names_[i] + "' has " + std::to_string(columns_[i].size()) +
                      " cells, expected " + std::to_string(rows_));
  }
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  throw DataError("unknown column '" + std::string(name) + "'");
}

Table Table::with_column(std::size_t i, std::vector<Cell> cells) const {
  auto columns = columns_;
  columns.at(i) = std::move(cells);
  return Table(names_, std::move(columns), rows_);
}

Table Table::select_columns(const std::vector<std::size_t>& indices) const {
  std::vector<std::string> names;
  std::vector<std::vector<Cell>> columns;
  for (std::size_t i : indices) {
    names.push_back(names_.at(i));
    columns.push_back(columns_.at(i));
  }
  return Table(std::move(names), std::move(columns), rows_);
}

namespace {

struct RawField {
  std::string text;
  bool quoted = false;
};

// Splits text into records of raw fields. Tracks physical line numbers only
// for error messages.
std::vector<std::vector<RawField>> split_records(std::string_view text) {
  std::vector<std::vector<RawField>> records;
  std::vector<RawField> record;
  RawField field;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool at_field_start = true;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field = RawField{};
    at_field_start = true;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  while (i < n) {
    const char c = text[i];
    if (at_field_start && c == '"') {
      field.quoted = true;
      at_field_start = false;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.text.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') ++line;
        field.text.push_back(text[i++]);
      }
      if (!closed) throw DataError("line " + std::to_string(line) + ": unterminated quoted field");
      if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
        throw DataError("line " + std::to_string(line) + ": unexpected character after closing quote");
      continue;
    }
    at_field_start = false;
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      end_record();
    } else {
      field.text.push_back(c);
      ++i;
    }
  }
  // A final record without a trailing newline.
  if (!at_field_start || !record.empty()) end_record();
  return records;
}

bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

Table parse_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  if (text.empty()) throw DataError("empty input");
  auto records = split_records(text);
  if (records.empty()) throw DataError("empty input");

  std::vector<std::string> names;
  for (auto& f : records.front()) names.push_back(std::move(f.text));
  const std::size_t width = names.size();
  std::vector<std::vector<Cell>> columns(width);
  for (auto& col : columns) col.reserve(records.size() - 1);

  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.size() != width)
      throw DataError("row " + std::to_string(r) + ": expected " + std::to_string(width) +
                      " fields, got " + std::to_string(rec.size()));
    for (std::size_t c = 0; c < width; ++c) {
      if (rec[c].text.empty() && !rec[c].quoted)
        columns[c].emplace_back(Missing{});
      else
        columns[c].emplace_back(std::move(rec[c].text));
    }
  }
  return Table(std::move(names), std::move(columns), records.size() - 1);
}

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string serialize_csv(const Table& table) {
  std::string out;
  const auto& names = table.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out.push_back(',');
    append_field(out, names[c]);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c) out.push_back(',');
      const Cell& cell = table.column(c)[r];
      if (const auto* d = std::get_if<double>(&cell))
        out += format_number(*d);
      else if (const auto* s = std::get_if<std::string>(&cell))
        append_field(out, *s);
    }
    out.push_back('\n');
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace credstack
