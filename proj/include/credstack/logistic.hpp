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
#include <span>
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/knn.hpp"

namespace credstack {

struct LogisticParams {
  double step = 0.1;
  std::size_t max_iter = 500;
  double tolerance = 1e-6;  // stop once max |gradient| falls below this

  bool operator==(const LogisticParams&) const = default;
};

// Multinomial softmax regression on standardized features. weights is
// n_classes x (d + 1) with the bias in the last column.
struct LogisticModel {
  LogisticParams params;
  Standardizer standardizer;
  Matrix weights;
  std::size_t iterations = 0;

  bool operator==(const LogisticModel&) const = default;
};

// Mean cross-entropy of weights W on (already standardized) X. When `grad`
// is non-null it receives dLoss/dW with W's shape.
double logistic_objective(const Matrix& W, const Matrix& X, std::span<const int> labels, Matrix* grad);

LogisticModel fit_logistic(const LabeledDataset& train, const LogisticParams& params = {});
Matrix predict_logistic(const LogisticModel& model, const Matrix& X);

}  // namespace credstack
