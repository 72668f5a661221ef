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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/tree.hpp"

namespace credstack {

// Second-order boosting for the softmax objective, one regression tree per
// class per round.
struct BoostParams {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;  // eta, in (0, 1]
  double lambda = 1.0;         // L2 on leaf weights
  double alpha = 0.0;          // L1 on leaf weights
  double gamma = 0.0;          // per-split penalty
  int max_depth = 6;
  std::size_t min_samples_leaf = 1;
  double min_child_weight = 1.0;  // minimum hessian sum per child
  std::size_t max_leaves = 0;     // 0: level-wise growth
  double feature_subsample = 1.0;

  bool operator==(const BoostParams&) const = default;
};

struct BoostModel {
  BoostParams params;
  std::vector<double> base_score;              // log class priors
  std::vector<std::vector<TreeModel>> rounds;  // rounds[r][class]
  std::vector<double> train_loss;              // mean cross-entropy; [0] before any round
  std::size_t n_features = 0;
  std::size_t n_classes = 0;

  bool operator==(const BoostModel&) const = default;
};

// sign(g) * max(|g| - alpha, 0)
inline double soft_threshold(double g, double alpha) {
  const double m = std::max(std::abs(g) - alpha, 0.0);
  return g > 0 ? m : (g < 0 ? -m : 0.0);
}

// -soft_threshold(G, alpha) / (H + lambda)
inline double leaf_weight(double G, double H, double lambda, double alpha) {
  return -soft_threshold(G, alpha) / (H + lambda);
}

// 1/2 [T(G_L)^2/(H_L+lambda) + T(G_R)^2/(H_R+lambda) - T(G_L+G_R)^2/(H_L+H_R+lambda)] - gamma,
// with T the L1 soft threshold (T(G) = G when alpha = 0).
inline double split_gain(double GL, double HL, double GR, double HR, double lambda, double alpha, double gamma) {
  const double tl = soft_threshold(GL, alpha);
  const double tr = soft_threshold(GR, alpha);
  const double tp = soft_threshold(GL + GR, alpha);
  return 0.5 * (tl * tl / (HL + lambda) + tr * tr / (HR + lambda) - tp * tp / (HL + HR + lambda)) - gamma;
}

std::vector<double> softmax(std::span<const double> scores);

// -log softmax(scores)[label]
double softmax_cross_entropy(std::span<const double> scores, int label);

// grad[k] = p_k - [label == k], hess[k] = p_k (1 - p_k)
void softmax_grad_hess(std::span<const double> scores, int label, std::span<double> grad, std::span<double> hess);

BoostModel fit_gbdt(const LabeledDataset& train, const BoostParams& params, std::uint64_t seed);

// Raw per-class scores: base_score + sum over rounds of eta * leaf value.
Matrix gbdt_raw_scores(const BoostModel& model, const Matrix& X);
Matrix predict_gbdt(const BoostModel& model, const Matrix& X);

}  // namespace credstack
