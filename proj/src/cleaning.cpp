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

#include "credstack/cleaning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "credstack/error.hpp"

namespace credstack {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string cell_key(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return format_number(std::get<double>(c));
}

}  // namespace

std::optional<double> parse_numeric(std::string_view text) {
  text = trim(text);
  if (text.ends_with('_')) text.remove_suffix(1);
  if (text.starts_with('+')) text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

Table coerce_numeric(const Table& table, std::string_view column) {
  const std::size_t idx = table.column_index(column);
  std::vector<Cell> cells;
  cells.reserve(table.row_count());
  for (const Cell& c : table.column(idx)) {
    if (const auto* s = std::get_if<std::string>(&c)) {
      if (auto v = parse_numeric(*s))
        cells.emplace_back(*v);
      else
        cells.emplace_back(Missing{});
    } else {
      cells.push_back(c);
    }
  }
  return table.with_column(idx, std::move(cells));
}

ColumnCleaning& CleaningReport::entry(std::string_view column) {
  for (auto& c : columns)
    if (c.column == column) return c;
  columns.push_back(ColumnCleaning{std::string(column), 0, 0, std::nullopt});
  return columns.back();
}

const ColumnCleaning* CleaningReport::find(std::string_view column) const {
  for (const auto& c : columns)
    if (c.column == column) return &c;
  return nullptr;
}

std::string CleaningReport::to_key_values() const {
  std::ostringstream out;
  out << "rows=" << row_count << '\n';
  for (const auto& c : columns) {
    out << "column." << c.column << ".coerced=" << c.coerced_cells << '\n';
    out << "column." << c.column << ".imputed=" << c.imputed_cells << '\n';
    if (c.mean) out << "column." << c.column << ".mean=" << format_number(*c.mean) << '\n';
  }
  return out.str();
}

std::pair<Table, CleaningReport> impute_mean(const Table& table, const std::vector<std::string>& exempt) {
  CleaningReport report;
  report.row_count = table.row_count();
  Table out = table;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const auto& name = table.column_names()[c];
    if (contains(exempt, name)) continue;
    const auto& cells = table.column(c);
    if (std::any_of(cells.begin(), cells.end(), is_text)) continue;

    double sum = 0.0;
    std::size_t observed = 0;
    for (const Cell& cell : cells)
      if (const auto* d = std::get_if<double>(&cell)) {
        sum += *d;
        ++observed;
      }
    auto& entry = report.entry(name);
    if (observed == 0) {
      if (cells.empty()) continue;
      throw DataError("column " + name + " has no observed values");
    }
    const double mean = sum / static_cast<double>(observed);
    entry.mean = mean;
    if (observed == cells.size()) continue;
    std::vector<Cell> filled = cells;
    for (Cell& cell : filled)
      if (is_missing(cell)) {
        cell = mean;
        ++entry.imputed_cells;
      }
    out = out.with_column(c, std::move(filled));
  }
  return {std::move(out), std::move(report)};
}

std::optional<std::size_t> CategoryCodebook::code_of(std::string_view value) const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == value) return i;
  return std::nullopt;
}

CategoryCodebook CategoryCodebook::fit(const std::vector<Cell>& cells) {
  CategoryCodebook book;
  std::unordered_map<std::string, std::size_t> seen;
  for (const Cell& c : cells) {
    if (is_missing(c)) continue;
    std::string key = cell_key(c);
    if (seen.emplace(key, book.values.size()).second) book.values.push_back(std::move(key));
  }
  return book;
}

std::vector<Cell> CategoryCodebook::encode(const std::vector<Cell>& cells, std::size_t* unseen) const {
  std::unordered_map<std::string_view, std::size_t> lookup;
  for (std::size_t i = 0; i < values.size(); ++i) lookup.emplace(values[i], i);
  std::vector<Cell> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) {
    if (is_missing(c)) {
      out.emplace_back(missing_code());
      continue;
    }
    const std::string key = cell_key(c);
    if (auto it = lookup.find(key); it != lookup.end()) {
      out.emplace_back(static_cast<double>(it->second));
    } else {
      out.emplace_back(missing_code());
      if (unseen) ++*unseen;
    }
  }
  return out;
}

Table encode_categorical(const Table& table, std::string_view column) {
  const std::size_t idx = table.column_index(column);
  const auto book = CategoryCodebook::fit(table.column(idx));
  return table.with_column(idx, book.encode(table.column(idx)));
}

LabeledDataset to_dataset(const Table& table, std::string_view label_column,
                          const std::vector<std::string>& class_order) {
  const std::size_t label_idx = table.column_index(label_column);
  if (class_order.empty()) throw UsageError("class order is empty");

  LabeledDataset ds;
  ds.class_names = class_order;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < table.column_count(); ++c)
    if (c != label_idx) {
      feature_cols.push_back(c);
      ds.feature_names.push_back(table.column_names()[c]);
    }

  const std::size_t n = table.row_count();
  Matrix features(n, feature_cols.size());
  for (std::size_t j = 0; j < feature_cols.size(); ++j) {
    const auto& cells = table.column(feature_cols[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const Cell& cell = cells[r];
      if (is_missing(cell))
        throw DataError("column '" + ds.feature_names[j] + "' has a missing value at row " + std::to_string(r + 1));
      const auto* d = std::get_if<double>(&cell);
      if (!d) throw DataError("column '" + ds.feature_names[j] + "' is not numeric at row " + std::to_string(r + 1));
      features(r, j) = *d;
    }
  }

  ds.labels.reserve(n);
  const auto& labels = table.column(label_idx);
  for (std::size_t r = 0; r < n; ++r) {
    if (is_missing(labels[r])) throw DataError("missing label at row " + std::to_string(r + 1));
    const std::string key = cell_key(labels[r]);
    const auto it = std::find(class_order.begin(), class_order.end(), key);
    if (it == class_order.end()) throw DataError("unknown class '" + key + "'");
    ds.labels.push_back(static_cast<int>(it - class_order.begin()));
  }
  ds.features = std::move(features);
  ds.validate();
  return ds;
}

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Label: return "label";
    case ColumnKind::Dropped: return "dropped";
  }
  return "numeric";
}

ColumnKind column_kind_from_string(std::string_view s) {
  if (s == "numeric") return ColumnKind::Numeric;
  if (s == "categorical") return ColumnKind::Categorical;
  if (s == "label") return ColumnKind::Label;
  if (s == "dropped") return ColumnKind::Dropped;
  throw DataError("unknown column kind '" + std::string(s) + "'");
}

std::vector<std::string> CleaningRecipe::feature_names() const {
  std::vector<std::string> names;
  for (const auto& c : columns)
    if (c.kind == ColumnKind::Numeric || c.kind == ColumnKind::Categorical) names.push_back(c.name);
  return names;
}

namespace {

ColumnKind infer_kind(const std::vector<Cell>& cells, double numeric_share) {
  std::size_t present = 0;
  std::size_t numeric = 0;
  for (const Cell& c : cells) {
    if (is_missing(c)) continue;
    ++present;
    if (is_number(c) || parse_numeric(std::get<std::string>(c))) ++numeric;
  }
  if (present == 0) return ColumnKind::Numeric;
  return static_cast<double>(numeric) >= numeric_share * static_cast<double>(present) ? ColumnKind::Numeric
                                                                                   : ColumnKind::Categorical;
}

}  // namespace

CleanResult clean_table(const Table& raw, const CleaningOptions& options) {
  raw.column_index(options.label_column);
  for (const auto* list : {&options.drop, &options.force_numeric, &options.force_categorical})
    for (const auto& name : *list) raw.column_index(name);

  CleaningRecipe recipe;
  recipe.label_column = options.label_column;
  recipe.class_order = options.class_order;

  std::vector<std::string> exempt{options.label_column};
  Table table = raw;
  std::vector<std::size_t> forced(raw.column_count(), 0);
  for (std::size_t c = 0; c < raw.column_count(); ++c) {
    const auto& name = raw.column_names()[c];
    ColumnRecipe col{name, ColumnKind::Numeric, 0.0, {}};
    if (name == options.label_column)
      col.kind = ColumnKind::Label;
    else if (contains(options.drop, name))
      col.kind = ColumnKind::Dropped;
    else if (contains(options.force_numeric, name))
      col.kind = ColumnKind::Numeric;
    else if (contains(options.force_categorical, name))
      col.kind = ColumnKind::Categorical;
    else
      col.kind = infer_kind(raw.column(c), options.numeric_share);

    if (col.kind == ColumnKind::Numeric) {
      const std::size_t before = std::count_if(raw.column(c).begin(), raw.column(c).end(), is_missing);
      table = coerce_numeric(table, name);
      const std::size_t after = std::count_if(table.column(c).begin(), table.column(c).end(), is_missing);
      forced[c] = after - before;
    } else {
      exempt.push_back(name);
    }
    recipe.columns.push_back(std::move(col));
  }

  auto [imputed, report] = impute_mean(table, exempt);
  table = std::move(imputed);

  CleaningReport full;
  full.row_count = raw.row_count();
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < raw.column_count(); ++c) {
    auto& col = recipe.columns[c];
    if (col.kind == ColumnKind::Dropped) continue;
    keep.push_back(c);
    if (col.kind == ColumnKind::Label) continue;
    auto& entry = full.entry(col.name);
    entry.coerced_cells = forced[c];
    if (col.kind == ColumnKind::Numeric) {
      if (const auto* e = report.find(col.name)) {
        entry.imputed_cells = e->imputed_cells;
        entry.mean = e->mean;
        col.mean = e->mean.value_or(0.0);
      }
    } else {
      col.codebook = CategoryCodebook::fit(table.column(c));
      table = table.with_column(c, col.codebook.encode(table.column(c)));
    }
  }
  return {table.select_columns(keep), std::move(full), std::move(recipe)};
}

Table apply_recipe(const Table& raw, const CleaningRecipe& recipe, std::vector<std::string>* warnings) {
  std::vector<std::string> names;
  std::vector<std::vector<Cell>> columns;
  for (const auto& col : recipe.columns) {
    if (col.kind == ColumnKind::Dropped) continue;
    const auto idx = raw.find_column(col.name);
    if (col.kind == ColumnKind::Label) {
      if (!idx) continue;
      names.push_back(col.name);
      columns.push_back(raw.column(*idx));
      continue;
    }
    if (!idx) throw DataError("missing column '" + col.name + "'");
    const auto& cells = raw.column(*idx);
    std::vector<Cell> out;
    out.reserve(cells.size());
    if (col.kind == ColumnKind::Numeric) {
      for (const Cell& c : cells) {
        if (const auto* d = std::get_if<double>(&c)) {
          out.emplace_back(*d);
        } else if (const auto* s = std::get_if<std::string>(&c)) {
          out.emplace_back(parse_numeric(*s).value_or(col.mean));
        } else {
          out.emplace_back(col.mean);
        }
      }
    } else {
      std::size_t unseen = 0;
      out = col.codebook.encode(cells, &unseen);
      if (unseen && warnings)
        warnings->push_back("column '" + col.name + "': " + std::to_string(unseen) +
                            " unseen categorical value(s) mapped to the missing code");
    }
    names.push_back(col.name);
    columns.push_back(std::move(out));
  }
  return Table(std::move(names), std::move(columns), raw.row_count());
}

}  // namespace credstack
