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
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/tree.hpp"

namespace credstack {

struct ForestParams {
  TreeParams tree;
  std::size_t n_trees = 200;
  bool bootstrap = true;
  std::size_t max_features = 0;  // features tried per split; 0 means ceil(sqrt(d))

  bool operator==(const ForestParams&) const = default;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::uint64_t> tree_seeds;
  ForestParams params;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;

  bool operator==(const ForestModel&) const = default;
};

// Tree t trains on its own bootstrap sample drawn from
// derive_seed(seed, {t}); trees may be fitted in parallel.
ForestModel fit_forest(const LabeledDataset& train, const ForestParams& params, std::uint64_t seed);

// Unweighted mean of the trees' class distributions.
Matrix predict_forest(const ForestModel& model, const Matrix& X);

}  // namespace credstack
