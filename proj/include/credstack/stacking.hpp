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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "credstack/classifier.hpp"
#include "credstack/dataset.hpp"
#include "credstack/forest.hpp"

namespace credstack {

struct NamedLearner {
  std::string name;
  std::shared_ptr<const Learner> learner;
};

enum class MetaFeatureMode { OutOfFold, InSample };

std::string_view to_string(MetaFeatureMode mode);
MetaFeatureMode meta_mode_from_string(std::string_view s);  // "oof" | "in-sample"

struct StackingParams {
  ForestParams meta;
  std::size_t n_folds = 5;
  MetaFeatureMode mode = MetaFeatureMode::OutOfFold;
};

// One column of the meta matrix Z.
struct MetaColumn {
  enum class Source { Feature, Base };
  Source source = Source::Feature;
  std::size_t index = 0;  // feature column, or base position
  std::size_t cls = 0;    // Base only
  std::string label;

  bool operator==(const MetaColumn&) const = default;
};

// Raw features first, then n_classes probability columns per base.
std::vector<MetaColumn> meta_layout(const std::vector<std::string>& feature_names,
                                    const std::vector<std::string>& base_names,
                                    const std::vector<std::string>& class_names);

struct OofMatrix {
  Matrix values;                  // rows x (n_bases * n_classes)
  std::vector<std::size_t> fold;  // fold of each row
};

// Throws DataError naming the class if any class has fewer than 2 rows.
OofMatrix oof_meta_features(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                            std::size_t n_folds, std::uint64_t seed);

// Base predictions on their own training rows (fit on all of train).
Matrix in_sample_meta_features(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                               std::uint64_t seed);

struct StackingModel {
  std::vector<std::string> base_names;
  std::vector<std::shared_ptr<const Classifier>> base_models;  // refit on all of train
  ForestModel meta_model;
  std::vector<MetaColumn> layout;
  std::size_t n_features = 0;
  std::size_t n_classes = 0;
  std::size_t n_folds = 0;
  MetaFeatureMode mode = MetaFeatureMode::OutOfFold;
  std::uint64_t seed = 0;
};

struct StackingFit {
  StackingModel model;
  Matrix meta_train;  // Z used to fit the meta-model
};

// `prefit`, when given, supplies the full-train base models (one per base, in
// order) instead of refitting them.
StackingFit fit_stacking_detailed(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                                  const StackingParams& params, std::uint64_t seed,
                                  const std::vector<std::shared_ptr<const Classifier>>* prefit = nullptr);
StackingModel fit_stacking(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                           const StackingParams& params, std::uint64_t seed);

// Z for X from the stored base models and layout.
Matrix stacking_meta_matrix(const StackingModel& model, const Matrix& X);
Matrix predict_stacking(const StackingModel& model, const Matrix& X);

// Builds Z from X and a row-aligned block of base probabilities.
Matrix assemble_meta(const Matrix& X, const Matrix& base_block, const std::vector<MetaColumn>& layout,
                     std::size_t n_classes);

nlohmann::json layout_to_json(const StackingModel& model);
std::vector<MetaColumn> layout_from_json(const nlohmann::json& j);

// Inverse of the stacking classifier's to_json().
StackingModel stacking_from_json(const nlohmann::json& j);

std::unique_ptr<Classifier> wrap(StackingModel model);

}  // namespace credstack
