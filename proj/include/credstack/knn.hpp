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
#include <vector>

#include "credstack/dataset.hpp"

namespace credstack {

// Per-column affine scaling fitted on training data: (x - mean) / scale, with
// scale the population standard deviation, or 1 for constant columns.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;

  bool operator==(const Standardizer&) const = default;
};

struct KnnModel {
  std::size_t k = 5;
  Standardizer standardizer;
  Matrix train;  // standardized
  std::vector<int> labels;
  std::size_t n_classes = 0;

  bool operator==(const KnnModel&) const = default;
};

KnnModel fit_knn(const LabeledDataset& train, std::size_t k = 5);

// Class frequencies among the k nearest training rows (Euclidean on the
// standardized features, ties to the lower training row).
Matrix predict_knn(const KnnModel& model, const Matrix& X);

}  // namespace credstack
