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

// Exact greedy tree growth over presorted columns. Each node owns the same
// [begin, end) range in every per-feature sample order; a split stably
// partitions all of them, so a level costs O(samples * features).
//
// Policy requirements:
//   using Stats;
//   Stats zero() const;
//   void add(Stats&, std::size_t sample) const;
//   bool splittable(const Stats&) const;
//   void begin_node(const Stats& parent, std::size_t n);  // before score() calls
//   std::optional<double> score(const Stats& parent, const Stats& left, std::size_t n_left) const;
//   std::vector<double> leaf(const Stats&, std::size_t n) const;

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "credstack/dataset.hpp"
#include "credstack/random.hpp"
#include "credstack/tree.hpp"

namespace credstack::detail {

struct GrowerLimits {
  int max_depth = 8;
  std::size_t min_samples_leaf = 1;
  std::size_t max_leaves = 0;
  std::size_t features_per_split = 0;  // 0: all pooled features
};

// Row ids of X sorted by (value, row) for every column; built once per fit and
// shared by all trees grown on X.
struct ColumnPresort {
  std::vector<std::vector<std::uint32_t>> order;

  static ColumnPresort build(const Matrix& X) {
    ColumnPresort p;
    p.order.resize(X.cols());
    for (std::size_t f = 0; f < X.cols(); ++f) {
      auto& ord = p.order[f];
      ord.resize(X.rows());
      std::iota(ord.begin(), ord.end(), std::uint32_t{0});
      std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double va = X(a, f), vb = X(b, f);
        return va < vb || (va == vb && a < b);
      });
    }
    return p;
  }
};

template <class Policy>
class Grower {
 public:
  using Stats = typename Policy::Stats;

  // `rows` maps sample id -> matrix row; `features` is the ascending pool of
  // candidate feature columns.
  // With `presort` (built on X), sample orders are derived by counting instead
  // of sorting; equal values then order by (row, sample).
  Grower(const Matrix& X, std::span<const std::size_t> rows, std::vector<std::size_t> features, Policy policy,
         GrowerLimits limits, std::uint64_t seed, const ColumnPresort* presort = nullptr)
      : policy_(std::move(policy)), features_(std::move(features)), limits_(limits), rng_(seed), n_(rows.size()) {
    if (limits_.features_per_split == 0 || limits_.features_per_split > features_.size())
      limits_.features_per_split = features_.size();
    values_.resize(features_.size());
    order_.resize(features_.size());

    // Samples of each matrix row, ascending, as a CSR bucket list.
    std::vector<std::uint32_t> start, bucket;
    if (presort) {
      start.assign(X.rows() + 1, 0);
      for (std::size_t r : rows) ++start[r + 1];
      for (std::size_t r = 0; r < X.rows(); ++r) start[r + 1] += start[r];
      bucket.resize(n_);
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (std::size_t s = 0; s < n_; ++s) bucket[fill[rows[s]]++] = static_cast<std::uint32_t>(s);
    }

    for (std::size_t fp = 0; fp < features_.size(); ++fp) {
      auto& vals = values_[fp];
      vals.resize(n_);
      for (std::size_t s = 0; s < n_; ++s) vals[s] = X(rows[s], features_[fp]);
      auto& ord = order_[fp];
      if (presort) {
        ord.reserve(n_);
        for (std::uint32_t r : presort->order[features_[fp]])
          for (std::uint32_t i = start[r]; i < start[r + 1]; ++i) ord.push_back(bucket[i]);
      } else {
        ord.resize(n_);
        std::iota(ord.begin(), ord.end(), std::uint32_t{0});
        std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
          return vals[a] < vals[b] || (vals[a] == vals[b] && a < b);
        });
      }
    }
    goes_left_.assign(n_, 0);
    scratch_.resize(n_);
  }

  struct Split {
    std::size_t feature_pos = 0;
    double threshold = 0.0;
    double score = 0.0;
    std::size_t n_left = 0;
  };

  // Best split of the whole sample over every pooled feature.
  std::optional<Split> root_split() {
    if (n_ < 2 * limits_.min_samples_leaf || features_.empty()) return std::nullopt;
    const Stats stats = range_stats(0, n_);
    if (!policy_.splittable(stats)) return std::nullopt;
    std::vector<std::size_t> all(features_.size());
    std::iota(all.begin(), all.end(), 0);
    return find_split(0, n_, stats, all);
  }

  std::size_t pool_feature(std::size_t pos) const { return features_[pos]; }

  TreeModel grow(std::size_t n_features, std::size_t n_outputs) {
    TreeModel model;
    model.n_features = n_features;
    model.n_outputs = n_outputs;
    nodes_ = &model.nodes;
    model.nodes.push_back(make_node(0, n_));
    if (limits_.max_leaves == 0) {
      expand_depth_first(0, 0, n_, 0);
    } else {
      expand_best_first();
    }
    nodes_ = nullptr;
    return model;
  }

 private:
  Stats range_stats(std::size_t b, std::size_t e) const {
    Stats s = policy_.zero();
    for (std::size_t i = b; i < e; ++i) policy_.add(s, order_[0][i]);
    return s;
  }

  TreeNode make_node(std::size_t b, std::size_t e) const {
    TreeNode node;
    node.samples = e - b;
    node.value = policy_.leaf(range_stats(b, e), e - b);
    return node;
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> pos(features_.size());
    std::iota(pos.begin(), pos.end(), 0);
    const std::size_t m = limits_.features_per_split;
    if (m >= pos.size()) return pos;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.uniform_index(pos.size() - i));
      std::swap(pos[i], pos[j]);
    }
    pos.resize(m);
    std::sort(pos.begin(), pos.end());
    return pos;
  }

  std::optional<Split> find_split(std::size_t b, std::size_t e, const Stats& parent,
                                  const std::vector<std::size_t>& candidates) {
    const std::size_t n = e - b;
    const std::size_t min_leaf = std::max<std::size_t>(1, limits_.min_samples_leaf);
    std::optional<Split> best;
    policy_.begin_node(parent, n);
    for (std::size_t fp : candidates) {
      const auto& ord = order_[fp];
      const auto& vals = values_[fp];
      Stats left = policy_.zero();
      for (std::size_t i = b; i + 1 < e; ++i) {
        policy_.add(left, ord[i]);
        const std::size_t nl = i - b + 1;
        if (nl < min_leaf) continue;
        if (n - nl < min_leaf) break;
        const double v = vals[ord[i]];
        const double next = vals[ord[i + 1]];
        if (!(v < next)) continue;
        const auto score = policy_.score(parent, left, nl);
        if (score && (!best || *score > best->score)) best = Split{fp, split_threshold(v, next), *score, nl};
      }
    }
    return best;
  }

  std::optional<Split> evaluate(std::size_t b, std::size_t e, int depth) {
    const std::size_t n = e - b;
    if (depth >= limits_.max_depth || n < 2 * std::max<std::size_t>(1, limits_.min_samples_leaf)) return std::nullopt;
    const Stats stats = range_stats(b, e);
    if (!policy_.splittable(stats)) return std::nullopt;
    return find_split(b, e, stats, candidate_features());
  }

  // Stable partition of every feature order on [b, e); returns the split point.
  std::size_t partition(std::size_t b, std::size_t e, const Split& split) {
    const auto& vals = values_[split.feature_pos];
    for (std::size_t i = b; i < e; ++i) {
      const std::uint32_t s = order_[split.feature_pos][i];
      goes_left_[s] = vals[s] <= split.threshold;
    }
    for (auto& ord : order_) {
      std::size_t l = b;
      std::size_t r = 0;
      for (std::size_t i = b; i < e; ++i) {
        const std::uint32_t s = ord[i];
        if (goes_left_[s])
          ord[l++] = s;
        else
          scratch_[r++] = s;
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r),
                ord.begin() + static_cast<std::ptrdiff_t>(l));
    }
    return b + split.n_left;
  }

  std::pair<int, int> apply_split(int node_id, std::size_t b, std::size_t e, const Split& split) {
    const std::size_t mid = partition(b, e, split);
    auto& nodes = *nodes_;
    const int left = static_cast<int>(nodes.size());
    nodes.push_back(make_node(b, mid));
    nodes.push_back(make_node(mid, e));
    TreeNode& node = nodes[static_cast<std::size_t>(node_id)];
    node.feature = static_cast<int>(features_[split.feature_pos]);
    node.threshold = split.threshold;
    node.gain = split.score;
    node.left = left;
    node.right = left + 1;
    return {left, left + 1};
  }

  void expand_depth_first(int node_id, std::size_t b, std::size_t e, int depth) {
    const auto split = evaluate(b, e, depth);
    if (!split) return;
    const std::size_t mid = b + split->n_left;
    const auto [left, right] = apply_split(node_id, b, e, *split);
    expand_depth_first(left, b, mid, depth + 1);
    expand_depth_first(right, mid, e, depth + 1);
  }

  struct Frontier {
    double score;
    int node_id;
    std::size_t b, e;
    int depth;
    Split split;
    bool operator<(const Frontier& o) const {
      return score < o.score || (score == o.score && node_id > o.node_id);
    }
  };

  void expand_best_first() {
    std::priority_queue<Frontier> heap;
    auto push = [&](int id, std::size_t b, std::size_t e, int depth) {
      if (auto s = evaluate(b, e, depth)) heap.push(Frontier{s->score, id, b, e, depth, *s});
    };
    push(0, 0, n_, 0);
    std::size_t leaves = 1;
    while (!heap.empty() && leaves < limits_.max_leaves) {
      const Frontier f = heap.top();
      heap.pop();
      const std::size_t mid = f.b + f.split.n_left;
      const auto [left, right] = apply_split(f.node_id, f.b, f.e, f.split);
      ++leaves;
      push(left, f.b, mid, f.depth + 1);
      push(right, mid, f.e, f.depth + 1);
    }
  }

  Policy policy_;
  std::vector<std::size_t> features_;
  GrowerLimits limits_;
  Rng rng_;
  std::size_t n_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<char> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<TreeNode>* nodes_ = nullptr;
};

// fit_tree_on_rows over a presort of X.
TreeModel fit_tree_presorted(const Matrix& X, std::span<const int> labels, std::size_t n_classes,
                             std::span<const std::size_t> rows, const TreeParams& params,
                             std::size_t features_per_split, std::uint64_t seed, const ColumnPresort& presort);

}  // namespace credstack::detail
