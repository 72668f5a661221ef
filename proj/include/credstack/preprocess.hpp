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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "credstack/dataset.hpp"

namespace credstack {

// Before/after bookkeeping for a row filter or resampler.
// rows_after == rows_before + rows_added - (rows actually removed); a row that
// violates several columns is counted once per column in removed_by_column.
struct FilterSummary {
  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  std::size_t rows_added = 0;
  std::vector<std::pair<std::string, std::size_t>> removed_by_column;
  std::vector<std::string> notes;

  std::string to_key_values() const;
};

struct FilterResult {
  LabeledDataset data;
  FilterSummary summary;
  std::vector<std::size_t> kept_rows;  // input row index of each output row
};

// z-score filtering. Statistics use the population standard deviation and are
// fitted once; a row is removed iff |x - mean| / stddev > threshold on any
// fitted column. Zero-variance columns are skipped.
struct ZScoreBounds {
  struct Column {
    std::size_t index = 0;
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;
    bool skipped = false;
  };
  double threshold = 3.0;
  std::vector<Column> columns;
};

// An empty `columns` selects every feature.
ZScoreBounds fit_zscore(const LabeledDataset& ds, double threshold, const std::vector<std::string>& columns = {});
FilterResult apply_zscore(const LabeledDataset& ds, const ZScoreBounds& bounds);
FilterResult zscore_filter(const LabeledDataset& ds, double threshold = 3.0,
                           const std::vector<std::string>& columns = {});

// IQR filtering with inclusive bounds [Q1 - m*IQR, Q3 + m*IQR].
struct IqrBounds {
  struct Column {
    std::size_t index = 0;
    std::string name;
    double q1 = 0.0;
    double q3 = 0.0;
    double lower = 0.0;
    double upper = 0.0;
  };
  double multiplier = 1.5;
  std::vector<Column> columns;
};

IqrBounds fit_iqr(const LabeledDataset& ds, double multiplier, const std::vector<std::string>& columns = {});
FilterResult apply_iqr(const LabeledDataset& ds, const IqrBounds& bounds);
FilterResult iqr_filter(const LabeledDataset& ds, double multiplier = 1.5,
                        const std::vector<std::string>& columns = {});

// Linear-interpolation quantile at position p*(n-1) of ascending `sorted`.
double quantile_linear(const std::vector<double>& sorted, double p);

// Tops every class up to the majority count by drawing that class's rows
// uniformly with replacement. Originals come first, in input order, followed
// by the copies grouped by class.
LabeledDataset random_oversample(const LabeledDataset& ds, std::uint64_t seed);

struct SplitResult {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

// Per class, floor(test_fraction * count) rows drawn without replacement go to
// test. Both parts keep input row order.
SplitResult stratified_split(const LabeledDataset& ds, double test_fraction, std::uint64_t seed);

// Fold id in [0, n_folds) per row. Each class is shuffled and dealt round-robin,
// continuing from where the previous class stopped, so fold sizes differ by at
// most one and n_folds == n gives leave-one-out.
std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t n_classes,
                                          std::size_t n_folds, std::uint64_t seed);

}  // namespace credstack
