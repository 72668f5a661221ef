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
#include <vector>

#include "credstack/error.hpp"
#include "credstack/neighbors.hpp"
#include "credstack/random.hpp"
#include "credstack/resample.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace credstack;

namespace {

LabeledDataset points(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                      std::size_t k) {
  LabeledDataset ds;
  ds.features = Matrix(rows.size(), rows.empty() ? 1 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) ds.features(r, c) = rows[r][c];
  ds.labels = labels;
  ds.feature_names = oracle::feature_names(ds.features.cols());
  ds.class_names = oracle::class_names(k);
  return ds;
}

// Two overlapping Gaussian blobs, the second one smaller.
LabeledDataset overlapping(std::uint64_t seed, std::size_t n0, std::size_t n1) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.features = Matrix(n0 + n1, 2);
  for (std::size_t r = 0; r < n0 + n1; ++r) {
    const bool second = r >= n0;
    ds.features(r, 0) = rng.normal() + (second ? 1.0 : 0.0);
    ds.features(r, 1) = rng.normal();
    ds.labels.push_back(second ? 1 : 0);
  }
  ds.feature_names = oracle::feature_names(2);
  ds.class_names = oracle::class_names(2);
  return ds;
}

}  // namespace

TEST_SUITE("resample") {
  TEST_CASE("knn_indices returns the nearest rows") {
    const NeighborIndex idx(Matrix(3, 2, {0, 0, 1, 0, 5, 0}));
    const std::vector<double> q{0.4, 0.0};
    CHECK(knn_indices(idx, q, 2, false) == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("knn_indices skips the query row when asked") {
    const NeighborIndex idx(Matrix(3, 1, {0, 1, 5}));
    const std::vector<double> q{1.0};
    CHECK(knn_indices(idx, q, 1, false) == std::vector<std::size_t>{1});
    CHECK(knn_indices(idx, q, 1, true) == std::vector<std::size_t>{0});
  }

  TEST_CASE("knn_indices breaks distance ties by row index") {
    const NeighborIndex idx(Matrix(4, 1, {2, -1, 1, -2}));
    const std::vector<double> q{0.0};
    CHECK(knn_indices(idx, q, 2, false) == std::vector<std::size_t>{1, 2});
    CHECK(knn_indices(idx, q, 4, false) == std::vector<std::size_t>{1, 2, 0, 3});
    CHECK_THROWS_AS(knn_indices(idx, q, 5, false), UsageError);
    CHECK_THROWS_AS(knn_indices(idx, std::vector<double>{2.0}, 4, true), UsageError);
  }

  TEST_CASE("knn_indices agrees with a full sort") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      const auto ds = oracle::random_dataset(rng, 40, 2, 2, trial % 2 == 0);
      const NeighborIndex idx(ds.features);
      const std::size_t k = 1 + rng.uniform_index(10);
      const std::size_t row = rng.uniform_index(40);
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t j = 0; j < 40; ++j)
        if (j != row) all.push_back({oracle::sq_dist(ds.features, row, j), j});
      std::sort(all.begin(), all.end());
      const auto got = idx.neighbors_of(row, k);
      for (std::size_t t = 0; t < k; ++t) CHECK(got[t] == all[t].second);
    }
  }

  TEST_CASE("smote interpolates on the segment") {
    const auto ds = points({{0, 0}, {2, 0}, {5, 5}, {6, 5}, {5, 6}}, {0, 0, 1, 1, 1}, 2);
    ResampleParams p;
    p.smote_k = 1;
    p.seed = 4;
    const auto res = smote(ds, p);
    REQUIRE(res.data.size() == 6);
    CHECK(res.data.labels[5] == 0);
    CHECK(res.data.features(5, 1) == 0.0);
    CHECK(res.data.features(5, 0) >= 0.0);
    CHECK(res.data.features(5, 0) < 2.0);
  }

  TEST_CASE("smote leaves balanced data unchanged") {
    const auto ds = points({{0}, {1}, {5}, {6}}, {0, 0, 1, 1}, 2);
    const auto res = smote(ds, {});
    CHECK(res.data == ds);
    CHECK(res.provenance.empty());
  }

  TEST_CASE("smote synthetic rows stay inside the class bounding box") {
    Rng rng(8);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
      rows.push_back({rng.normal(), rng.normal(), rng.normal()});
      labels.push_back(i < 3 ? 0 : 1);
    }
    const auto ds = points(rows, labels, 2);
    ResampleParams p;
    p.seed = 77;
    const auto res = smote(ds, p);
    CHECK(res.data.class_counts() == std::vector<std::size_t>{9, 9});
    CHECK(res.provenance.size() == 6);
    for (std::size_t s = res.original_rows; s < res.data.size(); ++s) {
      CHECK(res.data.labels[s] == 0);
      for (std::size_t c = 0; c < 3; ++c) {
        double lo = 1e300, hi = -1e300;
        for (std::size_t r = 0; r < 3; ++r) {
          lo = std::min(lo, ds.features(r, c));
          hi = std::max(hi, ds.features(r, c));
        }
        CHECK(res.data.features(s, c) >= lo);
        CHECK(res.data.features(s, c) <= hi);
      }
    }
  }

  TEST_CASE("smote provenance reconstructs every synthetic row") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
      auto ds = oracle::random_dataset(rng, 60, 3, 3, trial % 3 == 0);
      for (std::size_t r = 0; r < 30; ++r) ds.labels[r] = 1;
      ResampleParams p;
      p.smote_k = 1 + rng.uniform_index(6);
      p.seed = rng.next();
      const auto res = smote(ds, p);
      REQUIRE(res.provenance.size() == res.data.size() - res.original_rows);
      for (std::size_t i = 0; i < res.provenance.size(); ++i) {
        const auto& o = res.provenance[i];
        const std::size_t row = res.original_rows + i;
        CHECK(ds.labels[o.seed_row] == ds.labels[o.neighbor_row]);
        CHECK(res.data.labels[row] == ds.labels[o.seed_row]);
        CHECK(o.u >= 0.0);
        CHECK(o.u < 1.0);
        const auto want = interpolate(ds.features.row(o.seed_row), ds.features.row(o.neighbor_row), o.u);
        CHECK(std::equal(want.begin(), want.end(), res.data.features.row(row).begin()));
      }
      CHECK(smote(ds, p).data == res.data);
    }
  }

  TEST_CASE("smote needs two rows per class") {
    const auto ds = points({{0}, {1}, {2}, {3}}, {0, 1, 1, 1}, 2);
    CHECK_THROWS_AS(smote(ds, {}), DataError);
  }

  TEST_CASE("enn removes a lone point surrounded by another class") {
    // A second class-0 cluster keeps class 0 from being emptied.
    const auto ds = points({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {100, 100}, {101, 100}, {100, 101}},
                           {0, 1, 1, 1, 0, 0, 0}, 2);
    const auto res = enn(ds, 3);
    CHECK(res.kept_rows == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
    CHECK(res.warnings.empty());
  }

  TEST_CASE("enn keeps well separated clusters") {
    const auto ds = points({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {9, 9}, {9, 10}, {10, 9}, {10, 10}},
                           {0, 0, 0, 0, 1, 1, 1, 1}, 2);
    CHECK(enn(ds, 3).data == ds);
  }

  TEST_CASE("enn on four collinear points marks every row and the class guard keeps them") {
    // Every row sees the other three, so each plurality disagrees with it.
    const auto ds = points({{0}, {1}, {2}, {10}}, {0, 0, 1, 1}, 2);
    const auto res = enn(ds, 3);
    CHECK(res.kept_rows == oracle::enn_kept(ds, 3));
    CHECK(res.kept_rows.size() == 4);
    CHECK(res.warnings.size() == 2);
  }

  TEST_CASE("enn needs more rows than k") {
    const auto ds = points({{0}, {1}, {2}}, {0, 0, 1}, 2);
    CHECK_THROWS_AS(enn(ds, 3), DataError);
  }

  TEST_CASE("enn matches the brute-force reference") {
    Rng rng(33);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 5 + rng.uniform_index(120);
      const auto ds = oracle::random_dataset(rng, n, 1 + rng.uniform_index(3), 2 + rng.uniform_index(3),
                                             trial % 2 == 0);
      const std::size_t k = 1 + rng.uniform_index(std::min<std::size_t>(7, n - 1));
      CHECK(enn(ds, k).kept_rows == oracle::enn_kept(ds, k));
    }
  }

  TEST_CASE("smote_enn composes both stages") {
    const auto ds = overlapping(12, 120, 40);
    ResampleParams p;
    p.seed = 6;
    const auto res = smote_enn(ds, p);
    CHECK(res.class_counts_after_smote == std::vector<std::size_t>{120, 120});
    const auto mid = smote(ds, p);
    const auto kept = oracle::enn_kept(mid.data, p.enn_k);
    CHECK(res.enn_removed == mid.data.size() - kept.size());
    CHECK(res.enn_removed > 0);
    CHECK(res.synthetic_added == 80);
    CHECK(res.data == mid.data.subset(kept));
    CHECK(res.summary.rows_before == 160);
    CHECK(res.summary.rows_added == 80);
    CHECK(res.summary.rows_after == res.data.size());
    REQUIRE(res.provenance.size() == res.data.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      CHECK(res.provenance[i].has_value() == (kept[i] >= mid.original_rows));
    CHECK(smote_enn(ds, p).data == res.data);
  }

  TEST_CASE("smote_enn is a no-op on balanced separated data") {
    const auto ds = points({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {9, 9}, {9, 10}, {10, 9}, {10, 10}},
                           {0, 0, 0, 0, 1, 1, 1, 1}, 2);
    CHECK(smote_enn(ds, {}).data == ds);
  }
}
