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
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/table.hpp"

namespace credstack {

// Imbalanced 3-class Gaussian-mixture benchmark. Classes follow
// default_class_order(); component means are shared draws so that classes
// overlap, and a small fraction of labels is flipped.
struct SyntheticParams {
  std::size_t rows = 5000;
  std::size_t n_features = 10;
  std::size_t components_per_class = 3;
  std::vector<double> class_shares = {0.29, 0.53, 0.18};  // Poor, Standard, Good
  double center_spread = 1.0;   // sd of component means around the class center
  double class_separation = 1.2;  // distance between neighbouring class centers
  double label_noise = 0.05;
  std::uint64_t seed = 1;
};

LabeledDataset make_synthetic(const SyntheticParams& params);

// Same data as a raw table: f0..f{d-1} numeric, then a text label column.
Table synthetic_table(const SyntheticParams& params, const std::string& label_column = "Credit_Score");

}  // namespace credstack
