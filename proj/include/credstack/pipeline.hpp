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

#include <json.hpp>

#include "credstack/bundle.hpp"
#include "credstack/classifier.hpp"
#include "credstack/cleaning.hpp"
#include "credstack/config.hpp"
#include "credstack/metrics.hpp"
#include "credstack/report.hpp"
#include "credstack/resample.hpp"
#include "credstack/stacking.hpp"
#include "credstack/synthetic.hpp"

namespace credstack {

inline constexpr int kManifestFormatVersion = 1;

// ---------------------------------------------------------------------------
// Resampling by name: none | ros | smote | enn | smoteenn.

struct ResampleOutcome {
  LabeledDataset data;
  FilterSummary summary;
  // Per output row, set for SMOTE-generated rows.
  std::vector<std::optional<SyntheticOrigin>> provenance;
  std::vector<std::string> warnings;
};

void check_resample_method(const std::string& method);
std::string resample_display_name(const std::string& method);
ResampleOutcome resample_dataset(const LabeledDataset& ds, const std::string& method, const ResampleParams& params);

// ---------------------------------------------------------------------------

struct FilterConfig {
  bool enabled = true;
  double value = 0.0;                // z threshold or IQR multiplier
  std::vector<std::string> columns;  // empty: every feature
};

struct RosterEntry {
  BaseSpec spec;
  bool stack = true;  // also a base of the ensemble
};

struct PipelineConfig {
  std::string input;  // CSV path; empty means the synthetic benchmark
  SyntheticParams synthetic;
  CleaningOptions cleaning;
  FilterConfig zscore{true, 3.0, {}};
  FilterConfig iqr{true, 1.5, {}};
  double test_fraction = 0.2;
  std::string baseline_resample = "none";
  std::string resample_method = "smoteenn";
  bool compare = true;  // also run the baseline variant
  bool resample_before_split = false;
  std::size_t smote_k = 5;
  std::size_t enn_k = 3;
  std::vector<RosterEntry> roster;
  bool ensemble = true;
  std::string ensemble_name = "Ensemble Model";
  StackingParams stacking;
  Averaging averaging = Averaging::Macro;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string output_dir;
  std::string external_without;  // optional report CSVs appended to the tables
  std::string external_with;
  KeyValueConfig snapshot;  // parsed keys, minus the run-environment ones
};

// Relative paths resolve against base_dir. Throws UsageError on unknown keys,
// bad values, or a missing seed.
PipelineConfig pipeline_config_from(const KeyValueConfig& kv, const std::string& base_dir = "");
PipelineConfig load_pipeline_config(const std::string& path);

std::vector<RosterEntry> default_roster();

struct StageRecord {
  std::string name;
  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0.0;
};

struct ModelResult {
  MetricsReport report;
  Bundle bundle;
  Matrix test_probabilities;
  double fit_seconds = 0.0;
};

struct VariantResult {
  std::string id;      // e.g. without_smoteenn
  std::string title;   // e.g. Results without SMOTE-ENN
  std::string method;  // resampling applied to train
  std::vector<StageRecord> stages;
  std::vector<ModelResult> models;
  std::vector<ReportRow> external_rows;
  LabeledDataset test;
  std::vector<std::string> warnings;

  std::vector<ReportRow> table_rows() const;
};

struct RunResult {
  std::vector<VariantResult> variants;
  nlohmann::json manifest;
  nlohmann::json timings;
  std::optional<std::string> error;  // set when a stage failed
};

// Runs every variant. On a stage error the partial manifest is kept in the
// result and the exception is rethrown by run_and_write.
RunResult run_pipeline(const PipelineConfig& config);

// run_pipeline plus: manifest.json, timings.json, table_<variant>.{txt,md,csv},
// models/<variant>/<model>/ bundles. Rethrows stage errors after writing.
RunResult run_and_write(const PipelineConfig& config, const std::string& output_dir);

std::string slugify(const std::string& name);

}  // namespace credstack
