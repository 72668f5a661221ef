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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "credstack/dataset.hpp"
#include "credstack/forest.hpp"
#include "credstack/gbdt.hpp"
#include "credstack/knn.hpp"
#include "credstack/logistic.hpp"
#include "credstack/tree.hpp"

namespace credstack {

inline constexpr int kModelFormatVersion = 1;

// A fitted model producing one class distribution per input row.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string_view kind() const = 0;
  virtual std::size_t n_features() const = 0;
  virtual std::size_t n_classes() const = 0;
  virtual Matrix predict_proba(const Matrix& X) const = 0;
  // {format_version, model_type, params, ...model body}
  virtual nlohmann::json to_json() const = 0;
};

// Untrained model description. fit() is const and reentrant.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string_view kind() const = 0;
  virtual std::unique_ptr<Classifier> fit(const LabeledDataset& train, std::uint64_t seed) const = 0;
  virtual nlohmann::json params_json() const = 0;
};

// Constant predictor returning the training class frequencies.
struct PriorModel {
  std::vector<double> priors;
  std::size_t n_features = 0;
};

std::unique_ptr<Classifier> wrap(TreeModel model);
std::unique_ptr<Classifier> wrap(ForestModel model);
std::unique_ptr<Classifier> wrap(BoostModel model);
std::unique_ptr<Classifier> wrap(KnnModel model);
std::unique_ptr<Classifier> wrap(LogisticModel model);
std::unique_ptr<Classifier> wrap(PriorModel model);

std::unique_ptr<Learner> tree_learner(TreeParams params);
std::unique_ptr<Learner> forest_learner(ForestParams params);
std::unique_ptr<Learner> gbdt_learner(BoostParams params);
std::unique_ptr<Learner> knn_learner(std::size_t k);
std::unique_ptr<Learner> logistic_learner(LogisticParams params);
std::unique_ptr<Learner> prior_learner();

// Named learner configuration: kind in {tree, forest, gbdt, knn, logistic,
// prior}; params are the kind's hyperparameters as text.
struct BaseSpec {
  std::string name;
  std::string kind;
  std::map<std::string, std::string> params;
};

// Throws UsageError for an unknown kind or parameter key.
std::unique_ptr<Learner> make_learner(const BaseSpec& spec);

TreeParams tree_params_from(const std::map<std::string, std::string>& params, TreeParams base = {});
ForestParams forest_params_from(const std::map<std::string, std::string>& params, ForestParams base = {});

nlohmann::json tree_to_json(const TreeModel& tree);
TreeModel tree_from_json(const nlohmann::json& j);
nlohmann::json forest_to_json(const ForestModel& forest);
ForestModel forest_from_json(const nlohmann::json& j);

// Inverse of Classifier::to_json for the built-in model types.
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j);

}  // namespace credstack
