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


#include <algorithm>
#include <map>
#include <vector>

#include "credstack/error.hpp"
#include "credstack/preprocess.hpp"
#include "credstack/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace credstack;

namespace {

LabeledDataset column_dataset(const std::vector<double>& values) {
  LabeledDataset ds;
  ds.features = Matrix(values.size(), 1, values);
  ds.labels.assign(values.size(), 0);
  ds.feature_names = {"v"};
  ds.class_names = {"c0"};
  return ds;
}

LabeledDataset with_counts(const std::vector<std::size_t>& counts, std::uint64_t seed = 1) {
  Rng rng(seed);
  LabeledDataset ds;
  std::size_t n = 0;
  for (auto c : counts) n += c;
  ds.features = Matrix(n, 2);
  std::size_t r = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (std::size_t i = 0; i < counts[c]; ++i, ++r) {
      ds.features(r, 0) = static_cast<double>(r);  // unique row tag
      ds.features(r, 1) = rng.normal();
      ds.labels.push_back(static_cast<int>(c));
    }
  ds.feature_names = {"tag", "x"};
  ds.class_names = oracle::class_names(counts.size());
  return ds;
}

std::size_t total_removed(const FilterSummary& s) {
  std::size_t t = 0;
  for (const auto& [name, n] : s.removed_by_column) t += n;
  return t;
}

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("zscore removes the far outlier of nineteen zeros") {
    std::vector<double> v(19, 0.0);
    v.push_back(100.0);
    const auto res = zscore_filter(column_dataset(v), 3.0);
    CHECK(res.data.size() == 19);
    CHECK(res.summary.rows_before == 20);
    CHECK(res.summary.rows_after == 19);
    const auto bounds = fit_zscore(column_dataset(v), 3.0);
    CHECK(bounds.columns[0].mean == 5.0);
    CHECK(bounds.columns[0].stddev == doctest::Approx(21.7945).epsilon(1e-5));
  }

  TEST_CASE("zscore keeps a value exactly at the threshold") {
    std::vector<double> v(9, 0.0);
    v.push_back(100.0);  // mean 10, population sd 30, z = 3
    CHECK(zscore_filter(column_dataset(v), 3.0).data.size() == 10);
  }

  TEST_CASE("zscore skips constant columns and is the identity for huge thresholds") {
    const auto flat = zscore_filter(column_dataset({4, 4, 4, 4}), 3.0);
    CHECK(flat.data.size() == 4);
    CHECK(!flat.summary.notes.empty());
    const auto ds = with_counts({30, 30});
    CHECK(zscore_filter(ds, 1e9).data == ds);
  }

  TEST_CASE("zscore rejects bad input") {
    CHECK_THROWS_AS(zscore_filter(column_dataset({}), 3.0), DataError);
    CHECK_THROWS_AS(zscore_filter(column_dataset({1, 2}), 0.0), UsageError);
  }

  TEST_CASE("iqr bounds follow the linear quantile rule") {
    const auto ds = column_dataset({1, 2, 3, 4, 5, 6, 7, 100});
    const auto b = fit_iqr(ds, 1.5);
    CHECK(b.columns[0].q1 == 2.75);
    CHECK(b.columns[0].q3 == 6.25);
    CHECK(b.columns[0].upper == 11.5);
    const auto res = apply_iqr(ds, b);
    CHECK(res.data.size() == 7);
    CHECK(res.kept_rows == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  }

  TEST_CASE("iqr keeps equal values and huge multipliers keep everything") {
    CHECK(iqr_filter(column_dataset({5, 5, 5, 5}), 1.5).data.size() == 4);
    const auto ds = with_counts({40, 10});
    CHECK(iqr_filter(ds, 1e9).data == ds);
    CHECK_THROWS_AS(iqr_filter(column_dataset({}), 1.5), DataError);
  }

  TEST_CASE("applying the same fitted bounds twice is idempotent") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      auto ds = oracle::random_dataset(rng, 80, 3, 2, false);
      for (std::size_t r = 0; r < 5; ++r) ds.features(r, r % 3) *= 20.0;
      const auto zb = fit_zscore(ds, 2.0);
      const auto z1 = apply_zscore(ds, zb);
      CHECK(apply_zscore(z1.data, zb).data == z1.data);
      const auto ib = fit_iqr(ds, 1.0);
      const auto i1 = apply_iqr(ds, ib);
      CHECK(apply_iqr(i1.data, ib).data == i1.data);
      CHECK(total_removed(z1.summary) >= z1.summary.rows_before - z1.summary.rows_after);
      CHECK(total_removed(i1.summary) >= i1.summary.rows_before - i1.summary.rows_after);
    }
  }

  TEST_CASE("filters keep features and labels aligned") {
    Rng rng(4);
    auto ds = with_counts({50, 60, 40});
    for (std::size_t r = 0; r < ds.size(); r += 7) ds.features(r, 1) = 50.0 * rng.normal();
    for (const auto& res : {zscore_filter(ds, 1.0, {"x"}), iqr_filter(ds, 0.5, {"x"})}) {
      CHECK(res.data.size() < ds.size());
      for (std::size_t i = 0; i < res.data.size(); ++i) {
        const auto src = static_cast<std::size_t>(res.data.features(i, 0));
        CHECK(src == res.kept_rows[i]);
        CHECK(res.data.labels[i] == ds.labels[src]);
        CHECK(res.data.features(i, 1) == ds.features(src, 1));
      }
    }
  }

  TEST_CASE("quantile interpolation") {
    CHECK(quantile_linear({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(quantile_linear({7}, 0.25) == 7.0);
    CHECK(quantile_linear({0, 10}, 1.0) == 10.0);
  }

  TEST_CASE("random oversampling balances to the majority with exact copies") {
    const auto ds = with_counts({2, 5, 5});
    const auto out = random_oversample(ds, 3);
    CHECK(out.class_counts() == std::vector<std::size_t>{5, 5, 5});
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(out.labels[i] == ds.labels[i]);
      CHECK(std::equal(out.features.row(i).begin(), out.features.row(i).end(), ds.features.row(i).begin()));
    }
    for (std::size_t i = ds.size(); i < out.size(); ++i) {
      const auto src = static_cast<std::size_t>(out.features(i, 0));
      CHECK(out.labels[i] == ds.labels[src]);
      CHECK(std::equal(out.features.row(i).begin(), out.features.row(i).end(), ds.features.row(src).begin()));
    }
    CHECK(random_oversample(ds, 3) == out);
    const auto bal = with_counts({4, 4, 4});
    CHECK(random_oversample(bal, 8) == bal);
  }

  TEST_CASE("random oversampling needs every class") {
    auto ds = with_counts({3, 3});
    ds.class_names.push_back("empty");
    CHECK_THROWS_AS(random_oversample(ds, 1), DataError);
  }

  TEST_CASE("stratified split takes the floor per class") {
    const auto ds = with_counts({10, 10, 10});
    const auto s = stratified_split(ds, 0.2, 5);
    CHECK(s.test.class_counts() == std::vector<std::size_t>{2, 2, 2});
    CHECK(s.train.class_counts() == std::vector<std::size_t>{8, 8, 8});
    const auto again = stratified_split(ds, 0.2, 5);
    CHECK(again.test_rows == s.test_rows);
    std::vector<std::size_t> all = s.train_rows;
    all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
    CHECK(std::is_sorted(s.test_rows.begin(), s.test_rows.end()));
  }

  TEST_CASE("stratified split preserves proportions within one row") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<std::size_t> counts{2 + rng.uniform_index(40), 2 + rng.uniform_index(40),
                                            2 + rng.uniform_index(40)};
      const auto ds = with_counts(counts);
      const double f = 0.1 + 0.8 * rng.uniform01();
      const auto s = stratified_split(ds, f, rng.next());
      const auto tc = s.test.class_counts();
      for (std::size_t c = 0; c < 3; ++c) {
        const double want = f * static_cast<double>(counts[c]);
        CHECK(std::abs(static_cast<double>(tc[c]) - want) <= 1.0);
      }
    }
  }

  TEST_CASE("stratified split errors") {
    CHECK_THROWS_AS(stratified_split(with_counts({1, 5}), 0.2, 1), DataError);
    CHECK_THROWS_AS(stratified_split(with_counts({5, 5}), 0.0, 1), UsageError);
    CHECK_THROWS_AS(stratified_split(with_counts({5, 5}), 1.0, 1), UsageError);
  }

  TEST_CASE("stratified folds are balanced and cover leave-one-out") {
    const auto ds = with_counts({7, 11, 5});
    const auto folds = stratified_folds(ds.labels, 3, 5, 9);
    std::vector<std::size_t> size(5, 0);
    std::map<std::pair<int, std::size_t>, std::size_t> per;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      ++size[folds[i]];
      ++per[{ds.labels[i], folds[i]}];
    }
    const auto [lo, hi] = std::minmax_element(size.begin(), size.end());
    CHECK(*hi - *lo <= 1);
    for (int c = 0; c < 3; ++c)
      for (std::size_t f = 0; f < 5; ++f) CHECK(per[{c, f}] >= 1);

    const auto loo = stratified_folds(ds.labels, 3, ds.size(), 9);
    std::vector<std::size_t> sorted = loo;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  }
}
