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

#include "credstack/forest.hpp"

#include <cmath>
#include <numeric>

#include "credstack/error.hpp"
#include "credstack/parallel.hpp"
#include "credstack/random.hpp"
#include "tree_grower.hpp"

namespace credstack {

ForestModel fit_forest(const LabeledDataset& train, const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees < 1) throw UsageError("a forest needs at least one tree");
  if (train.size() == 0) throw DataError("cannot fit a forest on an empty training set");
  const std::size_t d = train.n_features();
  const std::size_t per_split =
      params.max_features == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
                               : std::min(params.max_features, d);

  ForestModel model;
  model.params = params;
  model.n_features = d;
  model.n_classes = train.n_classes();
  model.trees.resize(params.n_trees);
  model.tree_seeds.resize(params.n_trees);
  const detail::ColumnPresort presort = detail::ColumnPresort::build(train.features);
  parallel_for(params.n_trees, [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(seed, {t});
    Rng rng(tree_seed);
    std::vector<std::size_t> rows(train.size());
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(train.size()));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    model.tree_seeds[t] = tree_seed;
    model.trees[t] = detail::fit_tree_presorted(train.features, train.labels, train.n_classes(), rows, params.tree,
                                                per_split, rng.next(), presort);
  });
  return model;
}

Matrix predict_forest(const ForestModel& model, const Matrix& X) {
  if (X.cols() != model.n_features) throw DataError("forest: input width does not match the model");
  Matrix out(X.rows(), model.n_classes, 0.0);
  const double scale = 1.0 / static_cast<double>(model.trees.size());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    auto dst = out.row(r);
    for (const auto& tree : model.trees) {
      const auto v = tree.leaf_value(X.row(r));
      for (std::size_t c = 0; c < v.size(); ++c) dst[c] += v[c];
    }
    for (double& p : dst) p *= scale;
  }
  return out;
}

}  // namespace credstack
