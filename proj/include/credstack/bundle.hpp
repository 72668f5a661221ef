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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "credstack/classifier.hpp"
#include "credstack/cleaning.hpp"
#include "credstack/stacking.hpp"
#include "credstack/table.hpp"

namespace credstack {

// A fitted model plus everything needed to score raw files with it.
// Exactly one of `single` and `stacking` is set.
struct Bundle {
  std::string name;
  std::shared_ptr<const Classifier> single;
  std::optional<StackingModel> stacking;
  std::optional<CleaningRecipe> recipe;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  Matrix predict_proba(const Matrix& X) const;
};

struct PreparedInput {
  Matrix features;
  std::optional<std::vector<int>> labels;  // when the label column is present
  std::vector<std::string> warnings;
};

// Replays the bundle's cleaning recipe on a raw table and orders the features
// as at training time. Without a recipe the table must already be numeric.
PreparedInput prepare_input(const Bundle& bundle, const Table& raw);

nlohmann::json recipe_to_json(const CleaningRecipe& recipe);
CleaningRecipe recipe_from_json(const nlohmann::json& j);

// Layout on disk:
//   bundle.json      index (name, kind, names, file list)
//   cleaning.json    recipe, when present
//   model.json       single model
//   layout.json, base_<i>.json, meta.json   stacking model
void write_bundle(const std::string& dir, const Bundle& bundle);
Bundle read_bundle(const std::string& dir);

// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace credstack
