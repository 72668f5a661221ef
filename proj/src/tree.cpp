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

#include "credstack/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "credstack/error.hpp"
#include "tree_grower.hpp"

namespace credstack {

std::string_view to_string(Criterion c) { return c == Criterion::Gini ? "gini" : "entropy"; }

Criterion criterion_from_string(std::string_view s) {
  if (s == "gini") return Criterion::Gini;
  if (s == "entropy") return Criterion::Entropy;
  throw UsageError("unknown criterion '" + std::string(s) + "'");
}

namespace {

std::size_t total(std::span<const std::size_t> counts) {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

}  // namespace

namespace {

// Shared by the public functions and the split scorer so both round alike.
double gini_of(std::span<const std::size_t> counts, std::size_t n) {
  double sum_sq = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

double entropy_of(std::span<const std::size_t> counts, std::size_t n) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

double impurity_of(Criterion criterion, std::span<const std::size_t> counts, std::size_t n) {
  return criterion == Criterion::Gini ? gini_of(counts, n) : entropy_of(counts, n);
}

}  // namespace

double gini(std::span<const std::size_t> counts) {
  const std::size_t n = total(counts);
  if (n == 0) throw UsageError("gini: all counts are zero");
  return gini_of(counts, n);
}

double entropy(std::span<const std::size_t> counts) {
  const std::size_t n = total(counts);
  if (n == 0) throw UsageError("entropy: all counts are zero");
  return entropy_of(counts, n);
}

double impurity(Criterion criterion, std::span<const std::size_t> counts) {
  return criterion == Criterion::Gini ? gini(counts) : entropy(counts);
}

double impurity_decrease(Criterion criterion, std::span<const std::size_t> parent,
                         std::span<const std::size_t> left, std::span<const std::size_t> right) {
  const double n = static_cast<double>(total(parent));
  const double nl = static_cast<double>(total(left));
  const double nr = static_cast<double>(total(right));
  return impurity(criterion, parent) - (nl / n) * impurity(criterion, left) - (nr / n) * impurity(criterion, right);
}

double split_threshold(double a, double b) {
  double t = a + (b - a) * 0.5;
  if (!std::isfinite(t)) t = a * 0.5 + b * 0.5;
  if (!(t < b) || t < a) t = a;
  return t;
}

namespace {

class ClassPolicy {
 public:
  using Stats = std::vector<std::size_t>;

  ClassPolicy(std::vector<int> sample_labels, std::size_t n_classes, Criterion criterion)
      : labels_(std::move(sample_labels)), n_classes_(n_classes), criterion_(criterion), right_(n_classes) {}

  Stats zero() const { return Stats(n_classes_, 0); }
  void add(Stats& s, std::size_t sample) const { ++s[static_cast<std::size_t>(labels_[sample])]; }
  bool splittable(const Stats& s) const {
    return std::count_if(s.begin(), s.end(), [](std::size_t c) { return c > 0; }) > 1;
  }
  void begin_node(const Stats& parent, std::size_t n) {
    n_ = n;
    parent_impurity_ = impurity_of(criterion_, parent, n);
  }
  // Same arithmetic as impurity_decrease(), with the totals already known.
  std::optional<double> score(const Stats& parent, const Stats& left, std::size_t nl) const {
    for (std::size_t c = 0; c < n_classes_; ++c) right_[c] = parent[c] - left[c];
    const std::size_t nr = n_ - nl;
    const double n = static_cast<double>(n_);
    const double d = parent_impurity_ - (static_cast<double>(nl) / n) * impurity_of(criterion_, left, nl) -
                     (static_cast<double>(nr) / n) * impurity_of(criterion_, right_, nr);
    if (d > 0.0) return d;
    return std::nullopt;
  }
  std::vector<double> leaf(const Stats& s, std::size_t n) const {
    std::vector<double> p(n_classes_, 0.0);
    if (n == 0) return p;
    for (std::size_t c = 0; c < n_classes_; ++c) p[c] = static_cast<double>(s[c]) / static_cast<double>(n);
    return p;
  }

 private:
  std::vector<int> labels_;
  std::size_t n_classes_;
  Criterion criterion_;
  mutable std::vector<std::size_t> right_;
  std::size_t n_ = 0;
  double parent_impurity_ = 0.0;
};

std::vector<int> sample_labels(std::span<const int> labels, std::span<const std::size_t> rows) {
  std::vector<int> out(rows.size());
  for (std::size_t s = 0; s < rows.size(); ++s) out[s] = labels[rows[s]];
  return out;
}

std::vector<std::size_t> all_features(std::size_t d) {
  std::vector<std::size_t> f(d);
  std::iota(f.begin(), f.end(), 0);
  return f;
}

}  // namespace

std::optional<SplitCandidate> best_split(const Matrix& X, std::span<const int> labels, std::size_t n_classes,
                                         std::span<const std::size_t> rows, std::span<const std::size_t> features,
                                         Criterion criterion, std::size_t min_samples_leaf) {
  std::vector<std::size_t> pool(features.begin(), features.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  detail::GrowerLimits limits;
  limits.min_samples_leaf = min_samples_leaf;
  detail::Grower<ClassPolicy> grower(X, rows, pool, ClassPolicy(sample_labels(labels, rows), n_classes, criterion),
                                     limits, 0);
  const auto split = grower.root_split();
  if (!split) return std::nullopt;
  return SplitCandidate{grower.pool_feature(split->feature_pos), split->threshold, split->score};
}

TreeModel fit_tree_on_rows(const Matrix& X, std::span<const int> labels, std::size_t n_classes,
                           std::span<const std::size_t> rows, const TreeParams& params,
                           std::size_t features_per_split, std::uint64_t seed) {
  if (rows.empty()) throw DataError("cannot fit a tree on an empty sample");
  if (params.max_depth < 0) throw UsageError("max_depth must be non-negative");
  if (params.min_samples_leaf < 1) throw UsageError("min_samples_leaf must be at least 1");
  detail::GrowerLimits limits;
  limits.max_depth = params.max_depth;
  limits.min_samples_leaf = params.min_samples_leaf;
  limits.max_leaves = params.max_leaves;
  limits.features_per_split = features_per_split;
  detail::Grower<ClassPolicy> grower(X, rows, all_features(X.cols()),
                                     ClassPolicy(sample_labels(labels, rows), n_classes, params.criterion), limits,
                                     seed);
  TreeModel model = grower.grow(X.cols(), n_classes);
  model.params = params;
  return model;
}

namespace detail {

TreeModel fit_tree_presorted(const Matrix& X, std::span<const int> labels, std::size_t n_classes,
                             std::span<const std::size_t> rows, const TreeParams& params,
                             std::size_t features_per_split, std::uint64_t seed, const ColumnPresort& presort) {
  if (rows.empty()) throw DataError("cannot fit a tree on an empty sample");
  if (params.max_depth < 0) throw UsageError("max_depth must be non-negative");
  if (params.min_samples_leaf < 1) throw UsageError("min_samples_leaf must be at least 1");
  GrowerLimits limits;
  limits.max_depth = params.max_depth;
  limits.min_samples_leaf = params.min_samples_leaf;
  limits.max_leaves = params.max_leaves;
  limits.features_per_split = features_per_split;
  Grower<ClassPolicy> grower(X, rows, all_features(X.cols()),
                             ClassPolicy(sample_labels(labels, rows), n_classes, params.criterion), limits, seed,
                             &presort);
  TreeModel model = grower.grow(X.cols(), n_classes);
  model.params = params;
  return model;
}

}  // namespace detail

TreeModel fit_tree(const LabeledDataset& train, const TreeParams& params, std::uint64_t seed) {
  if (train.size() == 0) throw DataError("cannot fit a tree on an empty training set");
  if (!(params.feature_subsample > 0.0 && params.feature_subsample <= 1.0))
    throw UsageError("feature_subsample must lie in (0, 1]");
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), 0);
  const auto d = static_cast<double>(train.n_features());
  const auto per_split = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(params.feature_subsample * d)));
  return fit_tree_on_rows(train.features, train.labels, train.n_classes(), rows, params, per_split, seed);
}

std::size_t TreeModel::leaf_of(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf())
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                                                     : nodes[i].right);
  return i;
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

Matrix predict_tree(const TreeModel& model, const Matrix& X) {
  if (X.cols() != model.n_features) throw DataError("tree: input width does not match the model");
  Matrix out(X.rows(), model.n_outputs);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto v = model.leaf_value(X.row(r));
    std::copy(v.begin(), v.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace credstack
