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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "credstack/dataset.hpp"

namespace credstack {

enum class Criterion { Gini, Entropy };

std::string_view to_string(Criterion c);
Criterion criterion_from_string(std::string_view s);

struct TreeParams {
  int max_depth = 8;
  std::size_t min_samples_leaf = 5;
  Criterion criterion = Criterion::Gini;
  double feature_subsample = 1.0;  // share of features tried per split, in (0, 1]
  std::size_t max_leaves = 0;      // 0: level-wise; otherwise best-first up to this many leaves

  bool operator==(const TreeParams&) const = default;
};

// Flat node storage; node 0 is the root. Rows with x[feature] <= threshold go
// left. Leaves hold a class distribution (classification) or a single raw
// score (boosting).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double gain = 0.0;  // impurity decrease or boosting gain of the split
  std::size_t samples = 0;
  std::vector<double> value;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;
  std::size_t n_features = 0;
  std::size_t n_outputs = 0;
  TreeParams params;

  std::size_t leaf_of(std::span<const double> x) const;
  std::span<const double> leaf_value(std::span<const double> x) const { return nodes[leaf_of(x)].value; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  bool operator==(const TreeModel&) const = default;
};

// Impurities of a class-count vector. Throw UsageError when all counts are 0.
double gini(std::span<const std::size_t> counts);
double entropy(std::span<const std::size_t> counts);
double impurity(Criterion criterion, std::span<const std::size_t> counts);

// parent - (n_left/n) * left - (n_right/n) * right, evaluated in that order.
double impurity_decrease(Criterion criterion, std::span<const std::size_t> parent,
                         std::span<const std::size_t> left, std::span<const std::size_t> right);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;
};

// Exhaustive scan over `features` (ascending) of midpoints between
// consecutive distinct values. Keeps the first strictly best candidate, so
// ties go to the lowest feature, then the lowest threshold. nullopt when no
// split has positive decrease with both children >= min_samples_leaf.
// `rows` may repeat (bootstrap samples).
std::optional<SplitCandidate> best_split(const Matrix& X, std::span<const int> labels, std::size_t n_classes,
                                         std::span<const std::size_t> rows, std::span<const std::size_t> features,
                                         Criterion criterion, std::size_t min_samples_leaf);

// Midpoint of a < b that is guaranteed to satisfy a <= t < b.
double split_threshold(double a, double b);

// Greedy CART growth. Leaves store class frequencies.
TreeModel fit_tree(const LabeledDataset& train, const TreeParams& params, std::uint64_t seed);

// Tree on a row sample (repeats allowed), trying `features_per_split` features
// at each split. Used by the forest.
TreeModel fit_tree_on_rows(const Matrix& X, std::span<const int> labels, std::size_t n_classes,
                           std::span<const std::size_t> rows, const TreeParams& params,
                           std::size_t features_per_split, std::uint64_t seed);

Matrix predict_tree(const TreeModel& model, const Matrix& X);

}  // namespace credstack
