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

#include "credstack/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "credstack/error.hpp"
#include "credstack/gbdt.hpp"

namespace credstack {

namespace {

void linear_scores(const Matrix& W, std::span<const double> x, std::span<double> out) {
  const std::size_t d = x.size();
  for (std::size_t k = 0; k < W.rows(); ++k) {
    const auto w = W.row(k);
    double s = w[d];
    for (std::size_t j = 0; j < d; ++j) s += w[j] * x[j];
    out[k] = s;
  }
}

}  // namespace

double logistic_objective(const Matrix& W, const Matrix& X, std::span<const int> labels, Matrix* grad) {
  const std::size_t K = W.rows();
  const std::size_t d = X.cols();
  if (W.cols() != d + 1) throw UsageError("logistic: weight shape does not match input width");
  if (grad) *grad = Matrix(K, d + 1, 0.0);
  std::vector<double> s(K);
  double loss = 0.0;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto x = X.row(r);
    linear_scores(W, x, s);
    loss += softmax_cross_entropy(s, labels[r]);
    if (!grad) continue;
    const auto p = softmax(s);
    for (std::size_t k = 0; k < K; ++k) {
      const double e = p[k] - (static_cast<int>(k) == labels[r] ? 1.0 : 0.0);
      auto g = grad->row(k);
      for (std::size_t j = 0; j < d; ++j) g[j] += e * x[j];
      g[d] += e;
    }
  }
  const double n = static_cast<double>(X.rows());
  if (grad)
    for (std::size_t k = 0; k < K; ++k)
      for (double& v : grad->row(k)) v /= n;
  return loss / n;
}

LogisticModel fit_logistic(const LabeledDataset& train, const LogisticParams& params) {
  if (train.size() == 0) throw DataError("cannot fit logistic regression on an empty training set");
  if (!(params.step > 0.0)) throw UsageError("logistic step must be positive");
  LogisticModel model;
  model.params = params;
  model.standardizer = Standardizer::fit(train.features);
  const Matrix X = model.standardizer.apply(train.features);
  model.weights = Matrix(train.n_classes(), train.n_features() + 1, 0.0);
  Matrix grad;
  for (std::size_t it = 0; it < params.max_iter; ++it) {
    logistic_objective(model.weights, X, train.labels, &grad);
    double max_abs = 0.0;
    for (double g : grad.values()) max_abs = std::max(max_abs, std::abs(g));
    if (max_abs < params.tolerance) break;
    for (std::size_t k = 0; k < grad.rows(); ++k) {
      auto w = model.weights.row(k);
      const auto g = grad.row(k);
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= params.step * g[j];
    }
    model.iterations = it + 1;
  }
  return model;
}

Matrix predict_logistic(const LogisticModel& model, const Matrix& X) {
  const Matrix Z = model.standardizer.apply(X);
  const std::size_t K = model.weights.rows();
  Matrix out(X.rows(), K);
  std::vector<double> s(K);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    linear_scores(model.weights, Z.row(r), s);
    const auto p = softmax(s);
    std::copy(p.begin(), p.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace credstack
