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

#include "credstack/pipeline.hpp"

#include <cctype>
#include <chrono>
#include <exception>
#include <filesystem>
#include <set>

#include "credstack/error.hpp"
#include "credstack/parallel.hpp"
#include "credstack/preprocess.hpp"
#include "credstack/random.hpp"
#include "credstack/table.hpp"

namespace credstack {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Sub-seed streams of the master seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kResampleStream = 2;
constexpr std::uint64_t kModelStream = 3;
constexpr std::uint64_t kEnsembleStream = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::set<std::string> kKnownKeys = {
    "input", "label_column", "class_order", "clean.drop", "clean.numeric", "clean.categorical",
    "clean.numeric_share", "filter.zscore.enabled", "filter.zscore.threshold", "filter.zscore.columns",
    "filter.iqr.enabled", "filter.iqr.multiplier", "filter.iqr.columns", "split.test_fraction",
    "resample.baseline", "resample.method", "resample.compare", "resample.smote_k", "resample.enn_k",
    "resample.before_split", "ensemble.enabled", "ensemble.name", "ensemble.n_folds", "ensemble.meta_features",
    "metrics.average", "seed", "threads", "output_dir", "synthetic.rows", "synthetic.seed", "synthetic.features",
    "synthetic.components", "synthetic.separation", "synthetic.spread", "synthetic.label_noise",
    "report.external.without", "report.external.with"};

bool starts_with(const std::string& s, std::string_view prefix) { return s.compare(0, prefix.size(), prefix) == 0; }

std::vector<std::string> column_list(const KeyValueConfig& kv, const std::string& key) {
  const auto v = kv.get_or(key, "all");
  if (trim_copy(v) == "all") return {};
  return split_list(v);
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

std::string display_kind(const std::string& kind) {
  if (kind == "tree") return "Decision Tree";
  if (kind == "forest") return "Random Forest";
  if (kind == "gbdt") return "XGBoost";
  if (kind == "knn") return "KNN";
  if (kind == "logistic") return "Logistic Regression";
  if (kind == "prior") return "Class Prior";
  return kind;
}

json summary_json(const FilterSummary& s) {
  json removed = json::object();
  for (const auto& [col, n] : s.removed_by_column) removed[col] = n;
  return {{"rows_added", s.rows_added}, {"removed_by_column", removed}, {"notes", s.notes}};
}

json counts_json(const LabeledDataset& ds) {
  json out = json::object();
  const auto counts = ds.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) out[ds.class_names[c]] = counts[c];
  return out;
}

json stage_json(const StageRecord& s) {
  return {{"stage", s.name}, {"rows_before", s.rows_before}, {"rows_after", s.rows_after}, {"details", s.details}};
}

json report_json(const MetricsReport& r, std::string_view kind, const std::vector<std::string>& class_names) {
  json per_class = json::array();
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    per_class.push_back({{"class", class_names[c]},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support}});
  }
  json cm = json::array();
  for (std::size_t i = 0; i < r.confusion.n_classes; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.confusion.n_classes; ++j) row.push_back(r.confusion.at(i, j));
    cm.push_back(std::move(row));
  }
  return {{"model", r.model_name},
          {"kind", kind},
          {"f1", r.f1},
          {"recall", r.recall},
          {"precision", r.precision},
          {"roc_auc", r.roc_auc ? json(*r.roc_auc) : json(nullptr)},
          {"averaging", std::string(to_string(r.averaging))},
          {"n_test", r.n_test},
          {"per_class", std::move(per_class)},
          {"confusion", std::move(cm)}};
}

json build_manifest(const PipelineConfig& cfg, const RunResult& res, const std::vector<StageRecord>& common) {
  json config = json::object();
  for (const auto& [k, v] : cfg.snapshot.entries()) config[k] = v;
  json stages = json::array();
  for (const auto& s : common) stages.push_back(stage_json(s));
  json variants = json::array();
  for (const auto& v : res.variants) {
    json vs = json::array();
    for (const auto& s : v.stages) vs.push_back(stage_json(s));
    json models = json::array();
    for (const auto& m : v.models)
      models.push_back(report_json(m.report, m.bundle.stacking ? "stacking" : m.bundle.single->kind(), v.test.class_names));
    variants.push_back({{"id", v.id}, {"title", v.title}, {"resample", v.method}, {"stages", std::move(vs)},
                        {"models", std::move(models)}, {"warnings", v.warnings}});
  }
  json m = {{"format_version", kManifestFormatVersion},
            {"status", res.error ? "failed" : "ok"},
            {"config", std::move(config)},
            {"stages", std::move(stages)},
            {"variants", std::move(variants)}};
  if (res.error) m["error"] = *res.error;
  return m;
}

json build_timings(const RunResult& res, const std::vector<StageRecord>& common) {
  json stages = json::array(), models = json::array();
  for (const auto& s : common) stages.push_back({{"variant", ""}, {"stage", s.name}, {"seconds", s.seconds}});
  for (const auto& v : res.variants) {
    for (const auto& s : v.stages) stages.push_back({{"variant", v.id}, {"stage", s.name}, {"seconds", s.seconds}});
    for (const auto& m : v.models)
      models.push_back({{"variant", v.id}, {"model", m.report.model_name}, {"fit_seconds", m.fit_seconds}});
  }
  return {{"stages", std::move(stages)}, {"models", std::move(models)}};
}

struct Prepared {
  LabeledDataset data;
  CleaningRecipe recipe;
  CleaningReport cleaning_report;
};

// Runs one variant from the filtered dataset onward; appends to v as it goes.
void run_variant(const PipelineConfig& cfg, const Prepared& prep, std::size_t variant_index, VariantResult& v) {
  const ResampleParams rp{cfg.smote_k, cfg.enn_k, derive_seed(cfg.seed, {kResampleStream, variant_index})};
  LabeledDataset train, test;

  auto do_split = [&](const LabeledDataset& in) {
    const auto t0 = Clock::now();
    SplitResult split = stratified_split(in, cfg.test_fraction, derive_seed(cfg.seed, {kSplitStream}));
    StageRecord s{"split", in.size(), split.train.size(), json::object(), 0.0};
    s.details = {{"test_fraction", cfg.test_fraction},
                 {"train_rows", split.train.size()},
                 {"test_rows", split.test.size()},
                 {"train_class_counts", counts_json(split.train)},
                 {"test_class_counts", counts_json(split.test)}};
    s.seconds = seconds_since(t0);
    v.stages.push_back(std::move(s));
    train = std::move(split.train);
    test = std::move(split.test);
  };
  auto do_resample = [&](const LabeledDataset& in) {
    const auto t0 = Clock::now();
    ResampleOutcome out = resample_dataset(in, v.method, rp);
    StageRecord s{"resample", in.size(), out.data.size(), summary_json(out.summary), 0.0};
    s.details["method"] = v.method;
    s.details["class_counts"] = counts_json(out.data);
    s.details["warnings"] = out.warnings;
    s.seconds = seconds_since(t0);
    v.stages.push_back(std::move(s));
    for (auto& w : out.warnings) v.warnings.push_back("resample: " + w);
    return std::move(out.data);
  };

  if (cfg.resample_before_split) {
    do_split(do_resample(prep.data));
  } else {
    do_split(prep.data);
    train = do_resample(train);
  }
  v.test = test;

  const auto t_fit = Clock::now();
  StageRecord fit{"fit", train.size(), train.size(), json::object(), 0.0};
  json names = json::array();
  std::vector<NamedLearner> stack_bases;
  std::vector<std::shared_ptr<const Classifier>> stack_models;
  for (std::size_t b = 0; b < cfg.roster.size(); ++b) {
    const auto& entry = cfg.roster[b];
    std::shared_ptr<const Learner> learner = make_learner(entry.spec);
    const auto t0 = Clock::now();
    std::shared_ptr<const Classifier> model = learner->fit(train, derive_seed(cfg.seed, {kModelStream, b}));
    ModelResult mr;
    mr.fit_seconds = seconds_since(t0);
    mr.test_probabilities = model->predict_proba(test.features);
    mr.report = evaluate_probabilities(entry.spec.name, mr.test_probabilities, test.labels, test.n_classes(),
                                       cfg.averaging);
    mr.bundle = Bundle{entry.spec.name, model, std::nullopt, prep.recipe, train.feature_names, train.class_names};
    v.models.push_back(std::move(mr));
    names.push_back(entry.spec.name);
    if (entry.stack) {
      stack_bases.push_back({entry.spec.name, learner});
      stack_models.push_back(model);
    }
  }
  if (cfg.ensemble) {
    if (stack_bases.empty()) throw UsageError("ensemble enabled but no base has stack = true");
    const auto t0 = Clock::now();
    StackingModel sm =
        fit_stacking_detailed(train, stack_bases, cfg.stacking, derive_seed(cfg.seed, {kEnsembleStream}), &stack_models)
            .model;
    ModelResult mr;
    mr.fit_seconds = seconds_since(t0);
    mr.test_probabilities = predict_stacking(sm, test.features);
    mr.report = evaluate_probabilities(cfg.ensemble_name, mr.test_probabilities, test.labels, test.n_classes(),
                                       cfg.averaging);
    mr.bundle = Bundle{cfg.ensemble_name, nullptr, std::move(sm), prep.recipe, train.feature_names, train.class_names};
    v.models.push_back(std::move(mr));
    names.push_back(cfg.ensemble_name);
  }
  fit.details = {{"models", names}, {"class_counts", counts_json(train)}};
  fit.seconds = seconds_since(t_fit);
  v.stages.push_back(std::move(fit));
}

void run_impl(const PipelineConfig& cfg, RunResult& res, std::vector<StageRecord>& common) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);

  // load
  auto t0 = Clock::now();
  Table raw = cfg.input.empty() ? synthetic_table(cfg.synthetic, cfg.cleaning.label_column)
                                : parse_csv(read_file(cfg.input));
  StageRecord load{"load", raw.row_count(), raw.row_count(), json::object(), 0.0};
  load.details = {{"source", cfg.input.empty() ? "synthetic" : "csv"}, {"columns", raw.column_count()}};
  load.seconds = seconds_since(t0);
  common.push_back(std::move(load));

  // clean
  t0 = Clock::now();
  Prepared prep;
  {
    CleanResult cleaned = clean_table(raw, cfg.cleaning);
    prep.data = to_dataset(cleaned.table, cfg.cleaning.label_column, cfg.cleaning.class_order);
    prep.recipe = std::move(cleaned.recipe);
    prep.cleaning_report = std::move(cleaned.report);
  }
  StageRecord clean{"clean", raw.row_count(), prep.data.size(), json::object(), 0.0};
  json cols = json::array();
  for (const auto& c : prep.cleaning_report.columns)
    cols.push_back({{"column", c.column}, {"coerced", c.coerced_cells}, {"imputed", c.imputed_cells},
                    {"mean", c.mean ? json(*c.mean) : json(nullptr)}});
  clean.details = {{"features", prep.data.n_features()}, {"class_counts", counts_json(prep.data)},
                   {"columns", std::move(cols)}};
  clean.seconds = seconds_since(t0);
  common.push_back(std::move(clean));

  auto filter_stage = [&](const char* name, const FilterConfig& fc, auto&& run) {
    t0 = Clock::now();
    const std::size_t before = prep.data.size();
    FilterResult fr = run(prep.data, fc.value, fc.columns);
    StageRecord s{name, before, fr.data.size(), summary_json(fr.summary), 0.0};
    s.details["value"] = fc.value;
    s.details["columns"] = fc.columns.empty() ? json("all") : json(fc.columns);
    prep.data = std::move(fr.data);
    s.seconds = seconds_since(t0);
    common.push_back(std::move(s));
  };
  if (cfg.zscore.enabled)
    filter_stage("zscore", cfg.zscore, [](const LabeledDataset& d, double v, const std::vector<std::string>& c) {
      return zscore_filter(d, v, c);
    });
  if (cfg.iqr.enabled)
    filter_stage("iqr", cfg.iqr, [](const LabeledDataset& d, double v, const std::vector<std::string>& c) {
      return iqr_filter(d, v, c);
    });

  std::vector<std::string> methods;
  if (cfg.compare) methods.push_back(cfg.baseline_resample);
  methods.push_back(cfg.resample_method);
  const std::string label = resample_display_name(cfg.resample_method);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    VariantResult v;
    const bool baseline = cfg.compare && i == 0;
    v.method = methods[i];
    v.id = (baseline ? "without_" : "with_") + slugify(cfg.resample_method);
    v.title = std::string("Results ") + (baseline ? "without " : "with ") + label;
    const std::string& ext = baseline ? cfg.external_without : cfg.external_with;
    if (!ext.empty()) v.external_rows = parse_report_csv(read_file(ext));
    res.variants.push_back(std::move(v));
    run_variant(cfg, prep, i, res.variants.back());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void check_resample_method(const std::string& m) {
  if (m != "none" && m != "ros" && m != "smote" && m != "enn" && m != "smoteenn")
    throw UsageError("unknown resample method '" + m + "' (expected none, ros, smote, enn or smoteenn)");
}

std::string resample_display_name(const std::string& m) {
  if (m == "smoteenn") return "SMOTE-ENN";
  if (m == "smote") return "SMOTE";
  if (m == "enn") return "ENN";
  if (m == "ros") return "random oversampling";
  return "resampling";
}

ResampleOutcome resample_dataset(const LabeledDataset& ds, const std::string& method, const ResampleParams& params) {
  check_resample_method(method);
  ResampleOutcome out;
  out.summary.rows_before = ds.size();
  if (method == "none") {
    out.data = ds;
  } else if (method == "ros") {
    out.data = random_oversample(ds, params.seed);
    out.summary.rows_added = out.data.size() - ds.size();
  } else if (method == "smote") {
    SmoteResult r = smote(ds, params);
    out.summary.rows_added = r.provenance.size();
    out.provenance.assign(r.original_rows, std::nullopt);
    for (const auto& p : r.provenance) out.provenance.push_back(p);
    out.data = std::move(r.data);
  } else if (method == "enn") {
    EnnResult r = enn(ds, params.enn_k);
    out.summary.removed_by_column.push_back({"enn", ds.size() - r.data.size()});
    out.warnings = std::move(r.warnings);
    out.data = std::move(r.data);
  } else {
    SmoteEnnResult r = smote_enn(ds, params);
    out.summary = r.summary;
    out.provenance = std::move(r.provenance);
    out.warnings = std::move(r.warnings);
    out.data = std::move(r.data);
  }
  if (out.provenance.empty()) out.provenance.assign(out.data.size(), std::nullopt);
  out.summary.rows_after = out.data.size();
  return out;
}

std::vector<RosterEntry> default_roster() {
  return {{{"Decision Tree", "tree", {}}, false},
          {{"Random Forest", "forest", {}}, true},
          {{"XGBoost", "gbdt", {}}, true},
          {{"KNN", "knn", {}}, true},
          {{"Logistic Regression", "logistic", {}}, false}};
}

PipelineConfig pipeline_config_from(const KeyValueConfig& kv, const std::string& base_dir) {
  for (const auto& [key, _] : kv.entries())
    if (!kKnownKeys.count(key) && !starts_with(key, "base.") && !starts_with(key, "ensemble.meta."))
      throw UsageError("config: unknown key '" + key + "'");
  if (!kv.has("seed")) throw UsageError("config: 'seed' is required");

  PipelineConfig c;
  c.seed = kv.get_u64("seed", 0);
  c.input = resolve(kv.get_or("input", ""), base_dir);
  c.synthetic.rows = kv.get_size("synthetic.rows", c.synthetic.rows);
  c.synthetic.seed = kv.get_u64("synthetic.seed", c.seed);
  c.synthetic.n_features = kv.get_size("synthetic.features", c.synthetic.n_features);
  c.synthetic.components_per_class = kv.get_size("synthetic.components", c.synthetic.components_per_class);
  c.synthetic.class_separation = kv.get_double("synthetic.separation", c.synthetic.class_separation);
  c.synthetic.center_spread = kv.get_double("synthetic.spread", c.synthetic.center_spread);
  c.synthetic.label_noise = kv.get_double("synthetic.label_noise", c.synthetic.label_noise);

  c.cleaning.label_column = kv.get_or("label_column", c.cleaning.label_column);
  c.cleaning.class_order = kv.get_list("class_order", c.cleaning.class_order);
  c.cleaning.drop = kv.get_list("clean.drop");
  c.cleaning.force_numeric = kv.get_list("clean.numeric");
  c.cleaning.force_categorical = kv.get_list("clean.categorical");
  c.cleaning.numeric_share = kv.get_double("clean.numeric_share", c.cleaning.numeric_share);

  c.zscore = {kv.get_bool("filter.zscore.enabled", true), kv.get_double("filter.zscore.threshold", 3.0),
              column_list(kv, "filter.zscore.columns")};
  c.iqr = {kv.get_bool("filter.iqr.enabled", true), kv.get_double("filter.iqr.multiplier", 1.5),
           column_list(kv, "filter.iqr.columns")};
  if (c.zscore.enabled && !(c.zscore.value > 0.0)) throw UsageError("config: filter.zscore.threshold must be > 0");
  if (c.iqr.enabled && !(c.iqr.value > 0.0)) throw UsageError("config: filter.iqr.multiplier must be > 0");

  c.test_fraction = kv.get_double("split.test_fraction", c.test_fraction);
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw UsageError("config: split.test_fraction must lie in (0, 1)");

  c.baseline_resample = kv.get_or("resample.baseline", c.baseline_resample);
  c.resample_method = kv.get_or("resample.method", c.resample_method);
  check_resample_method(c.baseline_resample);
  check_resample_method(c.resample_method);
  c.compare = kv.get_bool("resample.compare", c.compare);
  c.resample_before_split = kv.get_bool("resample.before_split", c.resample_before_split);
  c.smote_k = kv.get_size("resample.smote_k", c.smote_k);
  c.enn_k = kv.get_size("resample.enn_k", c.enn_k);
  if (c.smote_k == 0 || c.enn_k == 0) throw UsageError("config: resample.smote_k and resample.enn_k must be >= 1");

  const auto base_ids = kv.indices("base");
  if (base_ids.empty()) c.roster = default_roster();
  std::set<std::string> names;
  for (std::size_t id : base_ids) {
    const std::string prefix = "base." + std::to_string(id) + ".";
    auto params = kv.section("base." + std::to_string(id));
    RosterEntry e;
    const auto kind = params.find("kind");
    if (kind == params.end()) throw UsageError("config: " + prefix + "kind is required");
    e.spec.kind = kind->second;
    params.erase(kind);
    if (const auto it = params.find("name"); it != params.end()) {
      e.spec.name = it->second;
      params.erase(it);
    } else {
      e.spec.name = display_kind(e.spec.kind);
    }
    if (const auto it = params.find("stack"); it != params.end()) {
      e.stack = parse_bool(it->second, prefix + "stack");
      params.erase(it);
    }
    e.spec.params = std::move(params);
    make_learner(e.spec);  // validates kind and parameters now
    c.roster.push_back(std::move(e));
  }
  for (const auto& e : c.roster)
    if (!names.insert(e.spec.name).second) throw UsageError("config: duplicate model name '" + e.spec.name + "'");

  c.ensemble = kv.get_bool("ensemble.enabled", c.ensemble);
  c.ensemble_name = kv.get_or("ensemble.name", c.ensemble_name);
  if (c.ensemble && names.count(c.ensemble_name))
    throw UsageError("config: ensemble name '" + c.ensemble_name + "' clashes with a base model");
  c.stacking.n_folds = kv.get_size("ensemble.n_folds", c.stacking.n_folds);
  if (c.stacking.n_folds < 2) throw UsageError("config: ensemble.n_folds must be >= 2");
  c.stacking.mode = meta_mode_from_string(kv.get_or("ensemble.meta_features", "oof"));
  c.stacking.meta = forest_params_from(kv.section("ensemble.meta"));

  c.averaging = averaging_from_string(kv.get_or("metrics.average", "macro"));
  c.threads = kv.get_size("threads", 0);
  c.output_dir = resolve(kv.get_or("output_dir", ""), base_dir);
  c.external_without = resolve(kv.get_or("report.external.without", ""), base_dir);
  c.external_with = resolve(kv.get_or("report.external.with", ""), base_dir);

  for (const auto& [k, v] : kv.entries())
    if (k != "threads" && k != "output_dir") c.snapshot.set(k, v);
  return c;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return pipeline_config_from(KeyValueConfig::load(path), fs::path(path).parent_path().string());
}

std::vector<ReportRow> VariantResult::table_rows() const {
  std::vector<ReportRow> rows;
  for (const auto& m : models) rows.push_back(to_row(m.report));
  rows.insert(rows.end(), external_rows.begin(), external_rows.end());
  return rows;
}

std::string slugify(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "model" : out;
}

RunResult run_pipeline(const PipelineConfig& config) {
  RunResult res;
  std::vector<StageRecord> common;
  run_impl(config, res, common);
  res.manifest = build_manifest(config, res, common);
  res.timings = build_timings(res, common);
  return res;
}

RunResult run_and_write(const PipelineConfig& config, const std::string& output_dir) {
  RunResult res;
  std::vector<StageRecord> common;
  std::exception_ptr failure;
  try {
    run_impl(config, res, common);
  } catch (const std::exception& e) {
    res.error = e.what();
    failure = std::current_exception();
  }
  res.manifest = build_manifest(config, res, common);
  res.timings = build_timings(res, common);

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw DataError("cannot create output directory " + output_dir + ": " + ec.message());
  const fs::path root(output_dir);
  write_file((root / "manifest.json").string(), dump_json(res.manifest));
  write_file((root / "timings.json").string(), dump_json(res.timings));
  if (failure) std::rethrow_exception(failure);

  std::string all_text;
  for (const auto& v : res.variants) {
    const auto rows = v.table_rows();
    const std::string text = render_text(v.title, rows);
    write_file((root / ("table_" + v.id + ".txt")).string(), text);
    write_file((root / ("table_" + v.id + ".md")).string(), render_markdown(v.title, rows));
    write_file((root / ("table_" + v.id + ".csv")).string(), render_csv(rows));
    all_text += (all_text.empty() ? "" : "\n") + text;
    for (const auto& m : v.models)
      write_bundle((root / "models" / v.id / slugify(m.report.model_name)).string(), m.bundle);
  }
  write_file((root / "report.txt").string(), all_text);
  return res;
}

}  // namespace credstack
