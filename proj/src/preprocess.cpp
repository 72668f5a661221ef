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

#include "credstack/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "credstack/error.hpp"
#include "credstack/random.hpp"
#include "credstack/table.hpp"

namespace credstack {

std::string FilterSummary::to_key_values() const {
  std::ostringstream out;
  out << "rows_before=" << rows_before << '\n' << "rows_after=" << rows_after << '\n';
  if (rows_added) out << "rows_added=" << rows_added << '\n';
  for (const auto& [col, n] : removed_by_column) out << "removed." << col << '=' << n << '\n';
  for (std::size_t i = 0; i < notes.size(); ++i) out << "note." << i << '=' << notes[i] << '\n';
  return out.str();
}

namespace {

std::vector<std::size_t> resolve_columns(const LabeledDataset& ds, const std::vector<std::string>& columns) {
  std::vector<std::size_t> out;
  if (columns.empty()) {
    out.resize(ds.n_features());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  for (const auto& name : columns) {
    const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
    if (it == ds.feature_names.end()) throw DataError("unknown column '" + name + "'");
    out.push_back(static_cast<std::size_t>(it - ds.feature_names.begin()));
  }
  return out;
}

std::vector<double> column_values(const LabeledDataset& ds, std::size_t col) {
  std::vector<double> v(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) v[r] = ds.features(r, col);
  return v;
}

// Shared row-removal pass: `violates(col_pos, value)` decides per column.
template <class Bounds, class Violates>
FilterResult apply_bounds(const LabeledDataset& ds, const Bounds& bounds, Violates violates) {
  FilterResult result;
  result.summary.rows_before = ds.size();
  std::vector<std::size_t> removed(bounds.columns.size(), 0);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    bool drop = false;
    for (std::size_t j = 0; j < bounds.columns.size(); ++j)
      if (violates(bounds.columns[j], ds.features(r, bounds.columns[j].index))) {
        ++removed[j];
        drop = true;
      }
    if (!drop) result.kept_rows.push_back(r);
  }
  for (std::size_t j = 0; j < bounds.columns.size(); ++j)
    result.summary.removed_by_column.emplace_back(bounds.columns[j].name, removed[j]);
  result.data = ds.subset(result.kept_rows);
  result.summary.rows_after = result.data.size();
  return result;
}

}  // namespace

ZScoreBounds fit_zscore(const LabeledDataset& ds, double threshold, const std::vector<std::string>& columns) {
  if (ds.size() == 0) throw DataError("z-score filter: empty dataset");
  if (!(threshold > 0.0)) throw UsageError("z-score filter: threshold must be positive");
  ZScoreBounds bounds;
  bounds.threshold = threshold;
  const double n = static_cast<double>(ds.size());
  for (std::size_t col : resolve_columns(ds, columns)) {
    ZScoreBounds::Column c{col, ds.feature_names[col]};
    const auto v = column_values(ds, col);
    c.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - c.mean) * (x - c.mean);
    c.stddev = std::sqrt(ss / n);
    c.skipped = !(c.stddev > 0.0);
    bounds.columns.push_back(std::move(c));
  }
  return bounds;
}

FilterResult apply_zscore(const LabeledDataset& ds, const ZScoreBounds& bounds) {
  auto result = apply_bounds(ds, bounds, [&](const ZScoreBounds::Column& c, double x) {
    return !c.skipped && std::abs(x - c.mean) / c.stddev > bounds.threshold;
  });
  for (const auto& c : bounds.columns)
    if (c.skipped) result.summary.notes.push_back("column '" + c.name + "' skipped: zero standard deviation");
  return result;
}

FilterResult zscore_filter(const LabeledDataset& ds, double threshold, const std::vector<std::string>& columns) {
  return apply_zscore(ds, fit_zscore(ds, threshold, columns));
}

double quantile_linear(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IqrBounds fit_iqr(const LabeledDataset& ds, double multiplier, const std::vector<std::string>& columns) {
  if (ds.size() == 0) throw DataError("IQR filter: empty dataset");
  if (!(multiplier > 0.0)) throw UsageError("IQR filter: multiplier must be positive");
  IqrBounds bounds;
  bounds.multiplier = multiplier;
  for (std::size_t col : resolve_columns(ds, columns)) {
    IqrBounds::Column c{col, ds.feature_names[col]};
    auto v = column_values(ds, col);
    std::sort(v.begin(), v.end());
    c.q1 = quantile_linear(v, 0.25);
    c.q3 = quantile_linear(v, 0.75);
    const double iqr = c.q3 - c.q1;
    c.lower = c.q1 - multiplier * iqr;
    c.upper = c.q3 + multiplier * iqr;
    bounds.columns.push_back(std::move(c));
  }
  return bounds;
}

FilterResult apply_iqr(const LabeledDataset& ds, const IqrBounds& bounds) {
  return apply_bounds(ds, bounds, [](const IqrBounds::Column& c, double x) { return x < c.lower || x > c.upper; });
}

FilterResult iqr_filter(const LabeledDataset& ds, double multiplier, const std::vector<std::string>& columns) {
  return apply_iqr(ds, fit_iqr(ds, multiplier, columns));
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const LabeledDataset& ds) {
  std::vector<std::vector<std::size_t>> by_class(ds.n_classes());
  for (std::size_t r = 0; r < ds.size(); ++r) by_class[static_cast<std::size_t>(ds.labels[r])].push_back(r);
  return by_class;
}

}  // namespace

LabeledDataset random_oversample(const LabeledDataset& ds, std::uint64_t seed) {
  const auto by_class = rows_by_class(ds);
  std::size_t majority = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].empty()) throw DataError("random oversampling: class '" + ds.class_names[c] + "' has no rows");
    majority = std::max(majority, by_class[c].size());
  }
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), 0);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    Rng rng(derive_seed(seed, {c}));
    const auto& members = by_class[c];
    for (std::size_t i = members.size(); i < majority; ++i) rows.push_back(members[rng.uniform_index(members.size())]);
  }
  return ds.subset(rows);
}

SplitResult stratified_split(const LabeledDataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw UsageError("test fraction must lie in (0, 1)");
  auto by_class = rows_by_class(ds);
  std::vector<char> in_test(ds.size(), 0);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (members.size() < 2)
      throw DataError("stratified split: class '" + ds.class_names[c] + "' has fewer than 2 rows");
    Rng rng(derive_seed(seed, {c}));
    shuffle(members, rng);
    const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < n_test; ++i) in_test[members[i]] = 1;
  }
  SplitResult out;
  for (std::size_t r = 0; r < ds.size(); ++r) (in_test[r] ? out.test_rows : out.train_rows).push_back(r);
  out.train = ds.subset(out.train_rows);
  out.test = ds.subset(out.test_rows);
  return out;
}

std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t n_classes,
                                          std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw UsageError("need at least 2 folds");
  if (n_folds > labels.size()) throw DataError("more folds than rows");
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t r = 0; r < labels.size(); ++r) by_class[static_cast<std::size_t>(labels[r])].push_back(r);
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t next = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    Rng rng(derive_seed(seed, {c}));
    shuffle(by_class[c], rng);
    for (std::size_t r : by_class[c]) {
      fold[r] = next;
      next = (next + 1) % n_folds;
    }
  }
  return fold;
}

}  // namespace credstack
