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
#include <optional>
#include <span>
#include <vector>

#include "credstack/dataset.hpp"

namespace credstack {

// Exact brute-force Euclidean neighbor search. Results are ordered by
// (squared distance, row index), so equal distances resolve to the lower row.
class NeighborIndex {
 public:
  explicit NeighborIndex(Matrix points);

  std::size_t size() const { return points_.rows(); }
  std::size_t dims() const { return points_.cols(); }
  const Matrix& points() const { return points_; }

  // k nearest rows to `query`, optionally skipping one row. Throws UsageError
  // when fewer than k rows remain.
  std::vector<std::size_t> query(std::span<const double> query, std::size_t k,
                                 std::optional<std::size_t> exclude_row = std::nullopt) const;

  // Neighbors of one of the indexed rows, excluding that row.
  std::vector<std::size_t> neighbors_of(std::size_t row, std::size_t k) const {
    return query(points_.row(row), k, row);
  }

 private:
  Matrix points_;
};

// With exclude_self, the lowest-index row exactly equal to `query` is skipped.
std::vector<std::size_t> knn_indices(const NeighborIndex& index, std::span<const double> query, std::size_t k,
                                     bool exclude_self);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace credstack
