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

#include "credstack/knn.hpp"

#include <cmath>
#include <string>

#include "credstack/error.hpp"
#include "credstack/neighbors.hpp"
#include "credstack/parallel.hpp"

namespace credstack {

Standardizer Standardizer::fit(const Matrix& X) {
  Standardizer s;
  const std::size_t d = X.cols();
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (X.rows() == 0) return s;
  const double n = static_cast<double>(X.rows());
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < X.rows(); ++r) sum += X(r, j);
    const double m = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < X.rows(); ++r) ss += (X(r, j) - m) * (X(r, j) - m);
    const double sd = std::sqrt(ss / n);
    s.mean[j] = m;
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  if (X.cols() != mean.size()) throw DataError("standardizer: input width does not match");
  Matrix out(X.rows(), X.cols());
  for (std::size_t r = 0; r < X.rows(); ++r)
    for (std::size_t j = 0; j < X.cols(); ++j) out(r, j) = (X(r, j) - mean[j]) / scale[j];
  return out;
}

KnnModel fit_knn(const LabeledDataset& train, std::size_t k) {
  if (k < 1) throw UsageError("kNN needs k >= 1");
  if (train.size() < k)
    throw DataError("kNN: k = " + std::to_string(k) + " exceeds the " + std::to_string(train.size()) +
                    " training rows");
  KnnModel model;
  model.k = k;
  model.standardizer = Standardizer::fit(train.features);
  model.train = model.standardizer.apply(train.features);
  model.labels = train.labels;
  model.n_classes = train.n_classes();
  return model;
}

Matrix predict_knn(const KnnModel& model, const Matrix& X) {
  const Matrix Z = model.standardizer.apply(X);
  const NeighborIndex index(model.train);
  Matrix out(X.rows(), model.n_classes, 0.0);
  const auto k = static_cast<double>(model.k);
  parallel_for(X.rows(), [&](std::size_t r) {
    auto dst = out.row(r);
    for (std::size_t j : index.query(Z.row(r), model.k)) dst[static_cast<std::size_t>(model.labels[j])] += 1.0;
    for (double& p : dst) p /= k;
  });
  return out;
}

}  // namespace credstack
