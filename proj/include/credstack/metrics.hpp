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
#include <string>
#include <string_view>
#include <vector>

#include "credstack/classifier.hpp"
#include "credstack/dataset.hpp"

namespace credstack {

enum class Averaging { Macro, Weighted };

std::string_view to_string(Averaging a);
Averaging averaging_from_string(std::string_view s);

struct ConfusionMatrix {
  std::size_t n_classes = 0;
  std::vector<std::size_t> counts;  // row-major, (true, predicted)

  std::size_t at(std::size_t truth, std::size_t pred) const { return counts[truth * n_classes + pred]; }
  std::size_t total() const;
  std::size_t row_sum(std::size_t c) const;
  std::size_t col_sum(std::size_t c) const;
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred, std::size_t n_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct PrfResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<ClassMetrics> per_class;
};

// Zero denominators give 0. Weighted averaging uses true-class support.
PrfResult precision_recall_f1(const ConfusionMatrix& cm, Averaging averaging = Averaging::Macro);

// Mann-Whitney AUC with average ranks for ties. Throws if either group is empty.
double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positive);

// One-vs-rest over the classes present in y_true. Throws DataError("AUC undefined ...")
// when fewer than two classes occur.
double roc_auc_ovr(const std::vector<int>& y_true, const Matrix& scores, Averaging averaging = Averaging::Macro);

// Lowest index wins ties.
std::vector<int> argmax_rows(const Matrix& probs);

struct MetricsReport {
  std::string model_name;
  double f1 = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  std::optional<double> roc_auc;
  std::vector<ClassMetrics> per_class;
  ConfusionMatrix confusion;
  std::size_t n_test = 0;
  Averaging averaging = Averaging::Macro;
};

MetricsReport evaluate_probabilities(std::string name, const Matrix& probs, const std::vector<int>& y_true,
                                     std::size_t n_classes, Averaging averaging = Averaging::Macro);
MetricsReport evaluate(const Classifier& model, const LabeledDataset& test, std::string name,
                       Averaging averaging = Averaging::Macro);

}  // namespace credstack
