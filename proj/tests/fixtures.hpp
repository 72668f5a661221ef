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


// Small seeded datasets shared by the unit and acceptance tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/random.hpp"
#include "oracles.hpp"

namespace fixture {

using credstack::LabeledDataset;
using credstack::Matrix;
using credstack::Rng;

// Three interleaved half-moons with Gaussian jitter, 2 features.
inline LabeledDataset moons3(std::uint64_t seed, std::size_t n, double noise = 0.25) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.features = Matrix(n, 2);
  for (std::size_t r = 0; r < n; ++r) {
    const int c = static_cast<int>(r % 3);
    const double t = std::numbers::pi * rng.uniform01();
    const double flip = c == 1 ? -1.0 : 1.0;
    ds.features(r, 0) = std::cos(t) + 1.0 * c + noise * rng.normal();
    ds.features(r, 1) = flip * std::sin(t) + (c == 1 ? 0.5 : 0.0) + noise * rng.normal();
    ds.labels.push_back(c);
  }
  ds.feature_names = oracle::feature_names(2);
  ds.class_names = oracle::class_names(3);
  return ds;
}

// k Gaussian blobs in d dimensions whose means sit `sep` apart on the
// first axis; class c gets counts[c] rows.
inline LabeledDataset blobs(std::uint64_t seed, const std::vector<std::size_t>& counts, std::size_t d, double sep) {
  Rng rng(seed);
  LabeledDataset ds;
  std::size_t n = 0;
  for (auto c : counts) n += c;
  ds.features = Matrix(n, d);
  std::size_t r = 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (std::size_t i = 0; i < counts[c]; ++i, ++r) {
      for (std::size_t j = 0; j < d; ++j) ds.features(r, j) = rng.normal();
      ds.features(r, 0) += sep * static_cast<double>(c);
      ds.labels.push_back(static_cast<int>(c));
    }
  ds.feature_names = oracle::feature_names(d);
  ds.class_names = oracle::class_names(counts.size());
  return ds;
}

// Blobs with a share of labels reassigned uniformly at random.
inline LabeledDataset noisy_blobs(std::uint64_t seed, std::size_t per_class, std::size_t k, double flip) {
  std::vector<std::size_t> counts(k, per_class);
  LabeledDataset ds = blobs(seed, counts, 3, 1.5);
  Rng rng(seed ^ 0x5bd1e995ULL);
  for (auto& y : ds.labels)
    if (rng.uniform01() < flip) y = static_cast<int>(rng.uniform_index(k));
  return ds;
}

}  // namespace fixture
