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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "credstack/metrics.hpp"

namespace credstack {

// One line of a model comparison table.
struct ReportRow {
  std::string model;
  double f1 = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  std::optional<double> roc_auc;  // rendered as N/A when absent

  bool operator==(const ReportRow&) const = default;
};

ReportRow to_row(const MetricsReport& report);
std::vector<ReportRow> to_rows(const std::vector<MetricsReport>& reports);

// Fixed 4-decimal formatting used by every renderer.
std::string format4(double v);

// Column order: Model, F1 Score, Recall, Precision, ROC AUC.
std::string render_text(std::string_view title, const std::vector<ReportRow>& rows);
std::string render_markdown(std::string_view title, const std::vector<ReportRow>& rows);
std::string render_csv(const std::vector<ReportRow>& rows);

// Inverse of render_csv. Values come back rounded to 4 decimals.
std::vector<ReportRow> parse_report_csv(std::string_view text);

}  // namespace credstack
