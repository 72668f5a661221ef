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

#include "credstack/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "credstack/error.hpp"

namespace credstack {

std::string_view to_string(Averaging a) { return a == Averaging::Macro ? "macro" : "weighted"; }

Averaging averaging_from_string(std::string_view s) {
  if (s == "macro") return Averaging::Macro;
  if (s == "weighted") return Averaging::Weighted;
  throw UsageError("unknown averaging '" + std::string(s) + "' (expected macro or weighted)");
}

std::size_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t ConfusionMatrix::row_sum(std::size_t c) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < n_classes; ++j) s += at(c, j);
  return s;
}

std::size_t ConfusionMatrix::col_sum(std::size_t c) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < n_classes; ++i) s += at(i, c);
  return s;
}

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred, std::size_t n_classes) {
  if (y_true.size() != y_pred.size())
    throw DataError("confusion: " + std::to_string(y_true.size()) + " labels but " +
                    std::to_string(y_pred.size()) + " predictions");
  ConfusionMatrix cm{n_classes, std::vector<std::size_t>(n_classes * n_classes, 0)};
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= n_classes || static_cast<std::size_t>(p) >= n_classes)
      throw DataError("confusion: label out of range at row " + std::to_string(i));
    ++cm.counts[static_cast<std::size_t>(t) * n_classes + static_cast<std::size_t>(p)];
  }
  return cm;
}

PrfResult precision_recall_f1(const ConfusionMatrix& cm, Averaging averaging) {
  PrfResult out;
  const std::size_t K = cm.n_classes;
  const std::size_t total = cm.total();
  for (std::size_t c = 0; c < K; ++c) {
    ClassMetrics m;
    const double tp = static_cast<double>(cm.at(c, c));
    const std::size_t col = cm.col_sum(c), row = cm.row_sum(c);
    m.support = row;
    m.precision = col == 0 ? 0.0 : tp / static_cast<double>(col);
    m.recall = row == 0 ? 0.0 : tp / static_cast<double>(row);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    out.per_class.push_back(m);
  }
  if (K == 0) return out;
  for (const auto& m : out.per_class) {
    const double w = averaging == Averaging::Macro
                         ? 1.0 / static_cast<double>(K)
                         : (total == 0 ? 0.0 : static_cast<double>(m.support) / static_cast<double>(total));
    out.precision += w * m.precision;
    out.recall += w * m.recall;
    out.f1 += w * m.f1;
  }
  return out;
}

double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw DataError("auc: score/label length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (positive[order[t]]) {
        rank_sum += avg_rank;
        ++n_pos;
      }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("AUC undefined: need both positive and negative rows");
  const double p = static_cast<double>(n_pos), q = static_cast<double>(n_neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double roc_auc_ovr(const std::vector<int>& y_true, const Matrix& scores, Averaging averaging) {
  if (scores.rows() != y_true.size()) throw DataError("auc: score rows do not match label count");
  const std::size_t K = scores.cols();
  std::vector<std::size_t> support(K, 0);
  for (int y : y_true) {
    if (y < 0 || static_cast<std::size_t>(y) >= K) throw DataError("auc: label out of range");
    ++support[static_cast<std::size_t>(y)];
  }
  std::size_t present = 0;
  for (std::size_t s : support) present += s > 0;
  if (present < 2) throw DataError("AUC undefined: fewer than two classes present");

  double sum = 0.0, weight = 0.0;
  std::vector<double> col(y_true.size());
  std::vector<bool> pos(y_true.size());
  for (std::size_t c = 0; c < K; ++c) {
    if (support[c] == 0) continue;
    for (std::size_t r = 0; r < y_true.size(); ++r) {
      col[r] = scores(r, c);
      pos[r] = static_cast<std::size_t>(y_true[r]) == c;
    }
    const double w = averaging == Averaging::Macro ? 1.0 : static_cast<double>(support[c]);
    sum += w * binary_auc(col, pos);
    weight += w;
  }
  return sum / weight;
}

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> out(probs.rows(), 0);
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < probs.cols(); ++c)
      if (probs(r, c) > probs(r, best)) best = c;
    out[r] = static_cast<int>(best);
  }
  return out;
}

MetricsReport evaluate_probabilities(std::string name, const Matrix& probs, const std::vector<int>& y_true,
                                     std::size_t n_classes, Averaging averaging) {
  if (probs.cols() != n_classes) throw DataError("evaluate: probability width does not match class count");
  MetricsReport rep;
  rep.model_name = std::move(name);
  rep.averaging = averaging;
  rep.n_test = y_true.size();
  rep.confusion = confusion(y_true, argmax_rows(probs), n_classes);
  const PrfResult prf = precision_recall_f1(rep.confusion, averaging);
  rep.precision = prf.precision;
  rep.recall = prf.recall;
  rep.f1 = prf.f1;
  rep.per_class = prf.per_class;
  std::size_t present = 0;
  for (std::size_t c = 0; c < n_classes; ++c) present += rep.confusion.row_sum(c) > 0;
  if (present >= 2) rep.roc_auc = roc_auc_ovr(y_true, probs, averaging);
  return rep;
}

MetricsReport evaluate(const Classifier& model, const LabeledDataset& test, std::string name, Averaging averaging) {
  return evaluate_probabilities(std::move(name), model.predict_proba(test.features), test.labels, test.n_classes(),
                                averaging);
}

}  // namespace credstack
