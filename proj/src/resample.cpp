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

#include "credstack/resample.hpp"

#include <algorithm>
#include <numeric>

#include "credstack/error.hpp"
#include "credstack/neighbors.hpp"
#include "credstack/parallel.hpp"
#include "credstack/random.hpp"

namespace credstack {

std::vector<double> interpolate(std::span<const double> seed, std::span<const double> neighbor, double u) {
  std::vector<double> out(seed.size());
  for (std::size_t j = 0; j < seed.size(); ++j) out[j] = seed[j] + u * (neighbor[j] - seed[j]);
  return out;
}

SmoteResult smote(const LabeledDataset& ds, const ResampleParams& params) {
  if (params.smote_k < 1) throw UsageError("smote_k must be at least 1");
  const std::size_t n_classes = ds.n_classes();
  std::vector<std::vector<std::size_t>> members(n_classes);
  for (std::size_t r = 0; r < ds.size(); ++r) members[static_cast<std::size_t>(ds.labels[r])].push_back(r);
  std::size_t majority = 0;
  for (const auto& m : members) majority = std::max(majority, m.size());
  for (std::size_t c = 0; c < n_classes; ++c)
    if (members[c].size() < 2 && members[c].size() < majority)
      throw DataError("SMOTE requires >= 2 rows per class (class '" + ds.class_names[c] + "' has " +
                      std::to_string(members[c].size()) + ")");

  struct ClassDraws {
    std::vector<SyntheticOrigin> origins;
    std::vector<std::vector<double>> rows;
  };
  std::vector<ClassDraws> draws(n_classes);

  parallel_for(n_classes, [&](std::size_t c) {
    const auto& rows = members[c];
    if (rows.size() >= majority) return;
    const std::size_t k = std::min(params.smote_k, rows.size() - 1);
    const NeighborIndex index(ds.features.select_rows(rows));
    std::vector<std::vector<std::size_t>> neighbors(rows.size());
    Rng rng(derive_seed(params.seed, {c}));
    auto& out = draws[c];
    for (std::size_t i = rows.size(); i < majority; ++i) {
      const auto pick = static_cast<std::size_t>(rng.uniform_index(rows.size()));
      if (neighbors[pick].empty()) neighbors[pick] = index.neighbors_of(pick, k);
      const std::size_t nn = neighbors[pick][rng.uniform_index(k)];
      const double u = rng.uniform01();
      SyntheticOrigin origin{rows[pick], rows[nn], u};
      out.rows.push_back(interpolate(ds.features.row(origin.seed_row), ds.features.row(origin.neighbor_row), u));
      out.origins.push_back(origin);
    }
  });

  SmoteResult result;
  result.data = ds;
  result.original_rows = ds.size();
  for (std::size_t c = 0; c < n_classes; ++c)
    for (std::size_t i = 0; i < draws[c].rows.size(); ++i) {
      result.data.features.append_row(draws[c].rows[i]);
      result.data.labels.push_back(static_cast<int>(c));
      result.provenance.push_back(draws[c].origins[i]);
    }
  return result;
}

EnnResult enn(const LabeledDataset& ds, std::size_t k) {
  if (k < 1) throw UsageError("enn_k must be at least 1");
  if (ds.size() <= k)
    throw DataError("ENN needs more than k = " + std::to_string(k) + " rows, got " + std::to_string(ds.size()));
  const std::size_t n_classes = ds.n_classes();
  const NeighborIndex index(ds.features);
  std::vector<char> remove(ds.size(), 0);
  parallel_for(ds.size(), [&](std::size_t i) {
    std::vector<std::size_t> votes(n_classes, 0);
    for (std::size_t j : index.neighbors_of(i, k)) ++votes[static_cast<std::size_t>(ds.labels[j])];
    const auto winner = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    remove[i] = winner != ds.labels[i];
  });

  EnnResult result;
  std::vector<std::size_t> total(n_classes, 0), removed(n_classes, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto c = static_cast<std::size_t>(ds.labels[i]);
    ++total[c];
    removed[c] += remove[i];
  }
  for (std::size_t c = 0; c < n_classes; ++c)
    if (total[c] > 0 && removed[c] == total[c])
      result.warnings.push_back("ENN would remove every row of class '" + ds.class_names[c] + "'; class kept");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto c = static_cast<std::size_t>(ds.labels[i]);
    if (!remove[i] || removed[c] == total[c]) result.kept_rows.push_back(i);
  }
  result.data = ds.subset(result.kept_rows);
  return result;
}

SmoteEnnResult smote_enn(const LabeledDataset& ds, const ResampleParams& params) {
  auto over = smote(ds, params);
  auto cleaned = enn(over.data, params.enn_k);

  SmoteEnnResult result;
  result.class_counts_after_smote = over.data.class_counts();
  result.synthetic_added = over.provenance.size();
  result.enn_removed = over.data.size() - cleaned.data.size();
  for (std::size_t r : cleaned.kept_rows)
    result.provenance.push_back(r >= over.original_rows ? std::optional(over.provenance[r - over.original_rows])
                                                        : std::nullopt);
  result.warnings = cleaned.warnings;
  result.summary.rows_before = ds.size();
  result.summary.rows_added = result.synthetic_added;
  result.summary.removed_by_column.emplace_back("enn", result.enn_removed);
  result.summary.notes = cleaned.warnings;
  result.data = std::move(cleaned.data);
  result.summary.rows_after = result.data.size();
  return result;
}

}  // namespace credstack
