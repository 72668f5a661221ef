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

#include "credstack/synthetic.hpp"

#include <cmath>
#include <numeric>

#include "credstack/error.hpp"
#include "credstack/random.hpp"

namespace credstack {

LabeledDataset make_synthetic(const SyntheticParams& p) {
  const std::size_t K = p.class_shares.size();
  if (K != default_class_order().size()) throw UsageError("synthetic: need one share per class");
  if (p.rows < K || p.n_features == 0 || p.components_per_class == 0)
    throw UsageError("synthetic: rows, features and components must be positive");

  // Per-class row counts; the largest class absorbs rounding.
  std::vector<std::size_t> counts(K);
  std::size_t assigned = 0, largest = 0;
  for (std::size_t c = 0; c < K; ++c) {
    counts[c] = static_cast<std::size_t>(std::llround(p.class_shares[c] * static_cast<double>(p.rows)));
    assigned += counts[c];
    if (p.class_shares[c] > p.class_shares[largest]) largest = c;
  }
  counts[largest] = counts[largest] + p.rows - assigned;

  Rng geo(derive_seed(p.seed, {0}));
  std::vector<double> direction(p.n_features);
  double norm = 0.0;
  for (double& v : direction) {
    v = geo.normal();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : direction) v /= norm;

  // Class centers lie on a line (ordinal classes); components scatter around them.
  const std::size_t M = p.components_per_class;
  std::vector<std::vector<double>> means(K * M, std::vector<double>(p.n_features));
  std::vector<std::vector<double>> scales(K * M, std::vector<double>(p.n_features));
  for (std::size_t c = 0; c < K; ++c)
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t j = 0; j < p.n_features; ++j) {
        means[c * M + m][j] = p.class_separation * static_cast<double>(c) * direction[j] * std::sqrt(static_cast<double>(p.n_features)) / 2.0 +
                              p.center_spread * geo.normal();
        scales[c * M + m][j] = 0.7 + 0.8 * geo.uniform01();
      }

  std::vector<int> labels;
  for (std::size_t c = 0; c < K; ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c));
  Rng order(derive_seed(p.seed, {1}));
  shuffle(labels, order);

  LabeledDataset ds;
  ds.features = Matrix(p.rows, p.n_features);
  ds.class_names = default_class_order();
  for (std::size_t j = 0; j < p.n_features; ++j) ds.feature_names.push_back("f" + std::to_string(j));
  Rng draw(derive_seed(p.seed, {2}));
  for (std::size_t r = 0; r < p.rows; ++r) {
    const auto c = static_cast<std::size_t>(labels[r]);
    const std::size_t comp = c * M + draw.uniform_index(M);
    for (std::size_t j = 0; j < p.n_features; ++j)
      ds.features(r, j) = means[comp][j] + scales[comp][j] * draw.normal();
    if (draw.uniform01() < p.label_noise) {
      const auto shift = 1 + draw.uniform_index(K - 1);
      labels[r] = static_cast<int>((c + shift) % K);
    }
  }
  ds.labels = std::move(labels);
  return ds;
}

Table synthetic_table(const SyntheticParams& params, const std::string& label_column) {
  const LabeledDataset ds = make_synthetic(params);
  std::vector<std::string> names = ds.feature_names;
  names.push_back(label_column);
  std::vector<std::vector<Cell>> cols(names.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t j = 0; j < ds.n_features(); ++j) cols[j].push_back(Cell{ds.features(r, j)});
    cols.back().push_back(Cell{ds.class_names[static_cast<std::size_t>(ds.labels[r])]});
  }
  return Table(std::move(names), std::move(cols), ds.size());
}

}  // namespace credstack
