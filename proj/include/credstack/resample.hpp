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
#include <string>
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/preprocess.hpp"

namespace credstack {

struct ResampleParams {
  std::size_t smote_k = 5;
  std::size_t enn_k = 3;
  std::uint64_t seed = 0;
};

// Where a synthetic row came from: row = seed + u * (neighbor - seed),
// evaluated per feature in that exact form. Row ids refer to the SMOTE input.
struct SyntheticOrigin {
  std::size_t seed_row = 0;
  std::size_t neighbor_row = 0;
  double u = 0.0;
};

// Interpolates one synthetic row. Shared by smote() and provenance checks.
std::vector<double> interpolate(std::span<const double> seed, std::span<const double> neighbor, double u);

struct SmoteResult {
  LabeledDataset data;  // originals first, then synthetic rows grouped by class
  std::size_t original_rows = 0;
  std::vector<SyntheticOrigin> provenance;  // one per synthetic row, in order
};

// Grows every class below the majority count to that count. Each synthetic row
// picks a class row uniformly, one of its min(smote_k, m-1) same-class nearest
// neighbors uniformly, and u uniform in [0, 1). Class c draws from its own
// stream derive_seed(seed, {c}).
SmoteResult smote(const LabeledDataset& ds, const ResampleParams& params);

struct EnnResult {
  LabeledDataset data;
  std::vector<std::size_t> kept_rows;
  std::vector<std::string> warnings;
};

// Edited nearest neighbors, single simultaneous pass. Row i is removed iff the
// plurality label of its k nearest other rows (ties to the lowest label)
// differs from its own. A class that would lose every row keeps all of them.
EnnResult enn(const LabeledDataset& ds, std::size_t k);

struct SmoteEnnResult {
  LabeledDataset data;
  FilterSummary summary;
  std::vector<std::size_t> class_counts_after_smote;
  std::size_t synthetic_added = 0;
  std::size_t enn_removed = 0;
  // Per output row: the origin when the row is synthetic.
  std::vector<std::optional<SyntheticOrigin>> provenance;
  std::vector<std::string> warnings;
};

SmoteEnnResult smote_enn(const LabeledDataset& ds, const ResampleParams& params);

}  // namespace credstack
