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

#include "credstack/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "credstack/error.hpp"
#include "credstack/parallel.hpp"
#include "credstack/random.hpp"
#include "tree_grower.hpp"

namespace credstack {

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> p(scores.size());
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) z += (p[k] = std::exp(scores[k] - m));
  for (double& v : p) v /= z;
  return p;
}

double softmax_cross_entropy(std::span<const double> scores, int label) {
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - m);
  return std::log(z) + m - scores[static_cast<std::size_t>(label)];
}

void softmax_grad_hess(std::span<const double> scores, int label, std::span<double> grad, std::span<double> hess) {
  const auto p = softmax(scores);
  for (std::size_t k = 0; k < p.size(); ++k) {
    grad[k] = p[k] - (static_cast<int>(k) == label ? 1.0 : 0.0);
    hess[k] = p[k] * (1.0 - p[k]);
  }
}

namespace {

struct GradStats {
  double G = 0.0;
  double H = 0.0;
};

class GradPolicy {
 public:
  using Stats = GradStats;

  GradPolicy(std::vector<double> g, std::vector<double> h, const BoostParams& p)
      : g_(std::move(g)), h_(std::move(h)), lambda_(p.lambda), alpha_(p.alpha), gamma_(p.gamma),
        min_child_weight_(p.min_child_weight) {}

  Stats zero() const { return {}; }
  void add(Stats& s, std::size_t sample) const {
    s.G += g_[sample];
    s.H += h_[sample];
  }
  bool splittable(const Stats&) const { return true; }
  void begin_node(const Stats&, std::size_t) {}
  std::optional<double> score(const Stats& parent, const Stats& left, std::size_t) const {
    const double GR = parent.G - left.G;
    const double HR = parent.H - left.H;
    if (left.H < min_child_weight_ || HR < min_child_weight_) return std::nullopt;
    const double gain = split_gain(left.G, left.H, GR, HR, lambda_, alpha_, gamma_);
    if (gain > 0.0) return gain;
    return std::nullopt;
  }
  std::vector<double> leaf(const Stats& s, std::size_t) const { return {leaf_weight(s.G, s.H, lambda_, alpha_)}; }

 private:
  std::vector<double> g_, h_;
  double lambda_, alpha_, gamma_, min_child_weight_;
};

double mean_loss(const Matrix& scores, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t r = 0; r < scores.rows(); ++r) total += softmax_cross_entropy(scores.row(r), labels[r]);
  return total / static_cast<double>(scores.rows());
}

void validate(const BoostParams& p) {
  if (!(p.learning_rate > 0.0 && p.learning_rate <= 1.0)) throw UsageError("learning_rate must lie in (0, 1]");
  if (p.lambda < 0.0 || p.alpha < 0.0 || p.gamma < 0.0) throw UsageError("lambda, alpha and gamma must be >= 0");
  if (p.max_depth < 0) throw UsageError("max_depth must be non-negative");
  if (!(p.feature_subsample > 0.0 && p.feature_subsample <= 1.0))
    throw UsageError("feature_subsample must lie in (0, 1]");
}

}  // namespace

BoostModel fit_gbdt(const LabeledDataset& train, const BoostParams& params, std::uint64_t seed) {
  validate(params);
  const std::size_t n = train.size();
  const std::size_t K = train.n_classes();
  if (n == 0) throw DataError("cannot fit boosting on an empty training set");
  if (K < 2) throw DataError("boosting needs at least two classes");
  const auto counts = train.class_counts();
  for (std::size_t k = 0; k < K; ++k)
    if (counts[k] == 0) throw DataError("class '" + train.class_names[k] + "' is absent from the training set");

  BoostModel model;
  model.params = params;
  model.n_features = train.n_features();
  model.n_classes = K;
  for (std::size_t k = 0; k < K; ++k)
    model.base_score.push_back(std::log(static_cast<double>(counts[k]) / static_cast<double>(n)));

  Matrix scores(n, K);
  for (std::size_t r = 0; r < n; ++r) std::copy(model.base_score.begin(), model.base_score.end(), scores.row(r).begin());
  model.train_loss.push_back(mean_loss(scores, train.labels));

  std::vector<std::size_t> rows(n), features(train.n_features());
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(features.begin(), features.end(), 0);
  detail::GrowerLimits limits;
  limits.max_depth = params.max_depth;
  limits.min_samples_leaf = params.min_samples_leaf;
  limits.max_leaves = params.max_leaves;
  limits.features_per_split = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(params.feature_subsample * static_cast<double>(train.n_features()))));

  const detail::ColumnPresort presort = detail::ColumnPresort::build(train.features);
  std::vector<double> grad(n * K), hess(n * K);
  for (std::size_t round = 0; round < params.n_rounds; ++round) {
    for (std::size_t r = 0; r < n; ++r)
      softmax_grad_hess(scores.row(r), train.labels[r], std::span(grad).subspan(r * K, K),
                        std::span(hess).subspan(r * K, K));
    std::vector<TreeModel> trees(K);
    parallel_for(K, [&](std::size_t k) {
      std::vector<double> g(n), h(n);
      for (std::size_t r = 0; r < n; ++r) {
        g[r] = grad[r * K + k];
        h[r] = hess[r * K + k];
      }
      detail::Grower<GradPolicy> grower(train.features, rows, features, GradPolicy(std::move(g), std::move(h), params),
                                        limits, derive_seed(seed, {round, k}), &presort);
      trees[k] = grower.grow(train.n_features(), 1);
      trees[k].params.max_depth = params.max_depth;
      trees[k].params.min_samples_leaf = params.min_samples_leaf;
      trees[k].params.max_leaves = params.max_leaves;
      trees[k].params.feature_subsample = params.feature_subsample;
    });
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < K; ++k)
        scores(r, k) += params.learning_rate * trees[k].leaf_value(train.features.row(r))[0];
    model.rounds.push_back(std::move(trees));
    model.train_loss.push_back(mean_loss(scores, train.labels));
  }
  return model;
}

Matrix gbdt_raw_scores(const BoostModel& model, const Matrix& X) {
  if (X.cols() != model.n_features) throw DataError("boosting: input width does not match the model");
  const std::size_t K = model.n_classes;
  Matrix scores(X.rows(), K);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    auto dst = scores.row(r);
    std::copy(model.base_score.begin(), model.base_score.end(), dst.begin());
    for (const auto& round : model.rounds)
      for (std::size_t k = 0; k < K; ++k) dst[k] += model.params.learning_rate * round[k].leaf_value(X.row(r))[0];
  }
  return scores;
}

Matrix predict_gbdt(const BoostModel& model, const Matrix& X) {
  Matrix scores = gbdt_raw_scores(model, X);
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto p = softmax(scores.row(r));
    std::copy(p.begin(), p.end(), scores.row(r).begin());
  }
  return scores;
}

}  // namespace credstack
