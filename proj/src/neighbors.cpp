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

#include "credstack/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "credstack/error.hpp"

namespace credstack {

NeighborIndex::NeighborIndex(Matrix points) : points_(std::move(points)) {
  if (points_.cols() == 0) throw UsageError("neighbor index needs at least one dimension");
  for (double v : points_.values())
    if (!std::isfinite(v)) throw DataError("neighbor index: non-finite coordinate");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<std::size_t> NeighborIndex::query(std::span<const double> q, std::size_t k,
                                              std::optional<std::size_t> exclude_row) const {
  if (q.size() != dims()) throw UsageError("neighbor query has the wrong dimension");
  const std::size_t available = size() - (exclude_row && *exclude_row < size() ? 1 : 0);
  if (k > available)
    throw UsageError("k = " + std::to_string(k) + " exceeds the " + std::to_string(available) + " available points");

  // Bounded max-heap on (distance, row); rows arrive in ascending order, so an
  // equal distance never displaces an earlier row.
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(k + 1);
  for (std::size_t r = 0; r < size() && k > 0; ++r) {
    if (exclude_row && r == *exclude_row) continue;
    const std::pair<double, std::size_t> c{squared_distance(q, points_.row(r)), r};
    if (cand.size() < k) {
      cand.push_back(c);
      std::push_heap(cand.begin(), cand.end());
    } else if (c < cand.front()) {
      std::pop_heap(cand.begin(), cand.end());
      cand.back() = c;
      std::push_heap(cand.begin(), cand.end());
    }
  }
  std::sort(cand.begin(), cand.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (const auto& c : cand) out.push_back(c.second);
  return out;
}

std::vector<std::size_t> knn_indices(const NeighborIndex& index, std::span<const double> query, std::size_t k,
                                     bool exclude_self) {
  std::optional<std::size_t> self;
  if (exclude_self)
    for (std::size_t r = 0; r < index.size(); ++r)
      if (std::equal(query.begin(), query.end(), index.points().row(r).begin())) {
        self = r;
        break;
      }
  return index.query(query, k, self);
}

}  // namespace credstack
