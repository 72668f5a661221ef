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
#include <utility>
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/table.hpp"

namespace credstack {

// Parses a raw cell as a real: surrounding whitespace is trimmed, then one
// trailing '_' and one leading '+' are dropped. Non-finite or partially
// numeric text yields nullopt.
std::optional<double> parse_numeric(std::string_view text);

// Converts every Text cell of `column` to Number, or Missing when it does not
// parse. Number and Missing cells pass through.
Table coerce_numeric(const Table& table, std::string_view column);

struct ColumnCleaning {
  std::string column;
  std::size_t coerced_cells = 0;  // Text cells forced to Missing
  std::size_t imputed_cells = 0;
  std::optional<double> mean;
};

struct CleaningReport {
  std::size_t row_count = 0;
  std::vector<ColumnCleaning> columns;

  ColumnCleaning& entry(std::string_view column);
  const ColumnCleaning* find(std::string_view column) const;
  // Flat key=value lines, one key per line, in column order.
  std::string to_key_values() const;
};

// Fills Missing cells of every numeric column (no Text cells) with the mean
// of its observed cells. Columns named in `exempt` are left untouched.
// Throws DataError("column X has no observed values") when a numeric column
// has rows but no observed cell.
std::pair<Table, CleaningReport> impute_mean(const Table& table,
                                             const std::vector<std::string>& exempt = {});

// Distinct values in first-appearance order; Missing encodes as size().
struct CategoryCodebook {
  std::vector<std::string> values;

  double missing_code() const { return static_cast<double>(values.size()); }
  std::optional<std::size_t> code_of(std::string_view value) const;

  static CategoryCodebook fit(const std::vector<Cell>& cells);
  // Unseen values map to the Missing code and bump *unseen when given.
  std::vector<Cell> encode(const std::vector<Cell>& cells, std::size_t* unseen = nullptr) const;
};

Table encode_categorical(const Table& table, std::string_view column);

// Features are all non-label columns in table order; labels are positions in
// class_order. Every feature cell must be a Number.
LabeledDataset to_dataset(const Table& table, std::string_view label_column,
                          const std::vector<std::string>& class_order = default_class_order());

// ---------------------------------------------------------------------------
// Whole-table cleaning: coerce -> impute -> encode, with the fitted state kept
// as a recipe so that the same transform can be replayed on new files.

enum class ColumnKind { Numeric, Categorical, Label, Dropped };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view s);

struct ColumnRecipe {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  double mean = 0.0;  // Numeric only
  CategoryCodebook codebook;  // Categorical only
};

struct CleaningRecipe {
  std::string label_column;
  std::vector<std::string> class_order;
  std::vector<ColumnRecipe> columns;  // input column order

  std::vector<std::string> feature_names() const;
};

struct CleaningOptions {
  std::string label_column = "Credit_Score";
  std::vector<std::string> class_order = default_class_order();
  std::vector<std::string> drop;
  std::vector<std::string> force_numeric;
  std::vector<std::string> force_categorical;
  // A column without an explicit kind is numeric when at least this share of
  // its non-missing cells parse as numbers.
  double numeric_share = 0.5;
};

struct CleanResult {
  Table table;
  CleaningReport report;
  CleaningRecipe recipe;
};

CleanResult clean_table(const Table& raw, const CleaningOptions& options);

// Replays a fitted recipe on a new table with the same columns (the label
// column may be absent). Unseen categories map to the Missing code and are
// reported in `warnings`.
Table apply_recipe(const Table& raw, const CleaningRecipe& recipe, std::vector<std::string>* warnings);

}  // namespace credstack
