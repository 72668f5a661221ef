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

#include "credstack/stacking.hpp"

#include "credstack/error.hpp"
#include "credstack/parallel.hpp"
#include "credstack/preprocess.hpp"
#include "credstack/random.hpp"

namespace credstack {

using nlohmann::json;

namespace {

// Sub-seed streams.
constexpr std::uint64_t kFoldStream = 0;
constexpr std::uint64_t kFoldFitStream = 1;
constexpr std::uint64_t kRefitStream = 2;
constexpr std::uint64_t kMetaStream = 3;

void check_bases(const LabeledDataset& train, const std::vector<NamedLearner>& bases) {
  if (bases.empty()) throw UsageError("stacking needs at least one base model");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (!bases[i].learner) throw UsageError("base '" + bases[i].name + "' has no learner");
    for (std::size_t j = 0; j < i; ++j)
      if (bases[i].name == bases[j].name) throw UsageError("duplicate base name '" + bases[i].name + "'");
  }
  const auto counts = train.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < 2)
      throw DataError("class '" + train.class_names[c] + "' has " + std::to_string(counts[c]) +
                      " rows, too few for stratified folding");
}

void check_probs(const Matrix& p, std::size_t rows, std::size_t n_classes, const std::string& name) {
  if (p.rows() != rows || p.cols() != n_classes)
    throw DataError("base '" + name + "' returned a probability matrix of the wrong shape");
}

std::vector<std::string> names_of(const std::vector<NamedLearner>& bases) {
  std::vector<std::string> out;
  for (const auto& b : bases) out.push_back(b.name);
  return out;
}

std::vector<std::shared_ptr<const Classifier>> refit_all(const LabeledDataset& train,
                                                         const std::vector<NamedLearner>& bases,
                                                         std::uint64_t seed) {
  std::vector<std::shared_ptr<const Classifier>> models(bases.size());
  parallel_for(bases.size(), [&](std::size_t b) {
    models[b] = bases[b].learner->fit(train, derive_seed(seed, {kRefitStream, b}));
  });
  return models;
}

}  // namespace

std::string_view to_string(MetaFeatureMode mode) {
  return mode == MetaFeatureMode::OutOfFold ? "oof" : "in-sample";
}

MetaFeatureMode meta_mode_from_string(std::string_view s) {
  if (s == "oof") return MetaFeatureMode::OutOfFold;
  if (s == "in-sample") return MetaFeatureMode::InSample;
  throw UsageError("unknown meta-feature mode '" + std::string(s) + "' (expected oof or in-sample)");
}

std::vector<MetaColumn> meta_layout(const std::vector<std::string>& feature_names,
                                    const std::vector<std::string>& base_names,
                                    const std::vector<std::string>& class_names) {
  std::vector<MetaColumn> layout;
  for (std::size_t j = 0; j < feature_names.size(); ++j)
    layout.push_back({MetaColumn::Source::Feature, j, 0, feature_names[j]});
  for (std::size_t b = 0; b < base_names.size(); ++b)
    for (std::size_t c = 0; c < class_names.size(); ++c)
      layout.push_back({MetaColumn::Source::Base, b, c, base_names[b] + ":" + class_names[c]});
  return layout;
}

OofMatrix oof_meta_features(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                            std::size_t n_folds, std::uint64_t seed) {
  check_bases(train, bases);
  const std::size_t K = train.n_classes();
  OofMatrix out;
  out.fold = stratified_folds(train.labels, K, n_folds, derive_seed(seed, {kFoldStream}));
  out.values = Matrix(train.size(), bases.size() * K);

  std::vector<std::vector<std::size_t>> in_fold(n_folds), out_fold(n_folds);
  for (std::size_t r = 0; r < train.size(); ++r)
    for (std::size_t f = 0; f < n_folds; ++f) (out.fold[r] == f ? in_fold : out_fold)[f].push_back(r);

  // Task t = (fold, base); each writes a disjoint block of out.values.
  parallel_for(n_folds * bases.size(), [&](std::size_t t) {
    const std::size_t f = t / bases.size();
    const std::size_t b = t % bases.size();
    if (in_fold[f].empty()) return;
    const auto model = bases[b].learner->fit(train.subset(out_fold[f]), derive_seed(seed, {kFoldFitStream, b, f}));
    const Matrix p = model->predict_proba(train.features.select_rows(in_fold[f]));
    check_probs(p, in_fold[f].size(), K, bases[b].name);
    for (std::size_t i = 0; i < in_fold[f].size(); ++i)
      for (std::size_t c = 0; c < K; ++c) out.values(in_fold[f][i], b * K + c) = p(i, c);
  });
  return out;
}

Matrix in_sample_meta_features(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                               std::uint64_t seed) {
  check_bases(train, bases);
  const auto models = refit_all(train, bases, seed);
  const std::size_t K = train.n_classes();
  Matrix out(train.size(), bases.size() * K);
  for (std::size_t b = 0; b < bases.size(); ++b) {
    const Matrix p = models[b]->predict_proba(train.features);
    check_probs(p, train.size(), K, bases[b].name);
    for (std::size_t r = 0; r < train.size(); ++r)
      for (std::size_t c = 0; c < K; ++c) out(r, b * K + c) = p(r, c);
  }
  return out;
}

Matrix assemble_meta(const Matrix& X, const Matrix& base_block, const std::vector<MetaColumn>& layout,
                     std::size_t n_classes) {
  if (base_block.rows() != X.rows()) throw DataError("meta assembly: row count mismatch");
  Matrix Z(X.rows(), layout.size());
  for (std::size_t j = 0; j < layout.size(); ++j) {
    const auto& col = layout[j];
    const bool feature = col.source == MetaColumn::Source::Feature;
    const std::size_t src = feature ? col.index : col.index * n_classes + col.cls;
    if (src >= (feature ? X.cols() : base_block.cols())) throw DataError("meta layout references a missing column");
    for (std::size_t r = 0; r < X.rows(); ++r) Z(r, j) = feature ? X(r, src) : base_block(r, src);
  }
  return Z;
}

StackingFit fit_stacking_detailed(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                                  const StackingParams& params, std::uint64_t seed,
                                  const std::vector<std::shared_ptr<const Classifier>>* prefit) {
  check_bases(train, bases);
  if (prefit && prefit->size() != bases.size()) throw UsageError("stacking: prefit model count does not match bases");
  auto full_models = [&] { return prefit ? *prefit : refit_all(train, bases, seed); };
  StackingFit fit;
  auto& m = fit.model;
  m.base_names = names_of(bases);
  m.n_features = train.n_features();
  m.n_classes = train.n_classes();
  m.n_folds = params.n_folds;
  m.mode = params.mode;
  m.seed = seed;

  std::vector<std::string> feature_names = train.feature_names;
  if (feature_names.size() != m.n_features) {
    feature_names.clear();
    for (std::size_t j = 0; j < m.n_features; ++j) feature_names.push_back("x" + std::to_string(j));
  }
  m.layout = meta_layout(feature_names, m.base_names, train.class_names);

  if (params.mode == MetaFeatureMode::OutOfFold) {
    const OofMatrix oof = oof_meta_features(train, bases, params.n_folds, seed);
    m.base_models = full_models();
    fit.meta_train = assemble_meta(train.features, oof.values, m.layout, m.n_classes);
  } else {
    m.base_models = full_models();
    fit.meta_train = stacking_meta_matrix(m, train.features);
  }

  LabeledDataset meta_ds;
  meta_ds.features = fit.meta_train;
  meta_ds.labels = train.labels;
  meta_ds.class_names = train.class_names;
  for (const auto& col : m.layout) meta_ds.feature_names.push_back(col.label);
  m.meta_model = fit_forest(meta_ds, params.meta, derive_seed(seed, {kMetaStream}));
  return fit;
}

StackingModel fit_stacking(const LabeledDataset& train, const std::vector<NamedLearner>& bases,
                           const StackingParams& params, std::uint64_t seed) {
  return fit_stacking_detailed(train, bases, params, seed).model;
}

Matrix stacking_meta_matrix(const StackingModel& model, const Matrix& X) {
  if (X.cols() != model.n_features)
    throw DataError("stacking: input has " + std::to_string(X.cols()) + " features, model expects " +
                    std::to_string(model.n_features));
  const std::size_t K = model.n_classes;
  Matrix block(X.rows(), model.base_models.size() * K);
  for (std::size_t b = 0; b < model.base_models.size(); ++b) {
    const Matrix p = model.base_models[b]->predict_proba(X);
    check_probs(p, X.rows(), K, model.base_names[b]);
    for (std::size_t r = 0; r < X.rows(); ++r)
      for (std::size_t c = 0; c < K; ++c) block(r, b * K + c) = p(r, c);
  }
  return assemble_meta(X, block, model.layout, K);
}

Matrix predict_stacking(const StackingModel& model, const Matrix& X) {
  return predict_forest(model.meta_model, stacking_meta_matrix(model, X));
}

nlohmann::json layout_to_json(const StackingModel& model) {
  json cols = json::array();
  for (const auto& c : model.layout)
    cols.push_back({{"source", c.source == MetaColumn::Source::Feature ? "feature" : "base"},
                    {"index", c.index},
                    {"class", c.cls},
                    {"label", c.label}});
  return {{"format_version", kModelFormatVersion},
          {"model_type", "stacking"},
          {"bases", model.base_names},
          {"n_features", model.n_features},
          {"n_classes", model.n_classes},
          {"n_folds", model.n_folds},
          {"meta_features", std::string(to_string(model.mode))},
          {"seed", model.seed},
          {"columns", std::move(cols)}};
}

std::vector<MetaColumn> layout_from_json(const nlohmann::json& j) {
  std::vector<MetaColumn> out;
  for (const auto& c : j.at("columns")) {
    const auto source = c.at("source").get<std::string>();
    if (source != "feature" && source != "base") throw DataError("layout: unknown column source '" + source + "'");
    out.push_back({source == "feature" ? MetaColumn::Source::Feature : MetaColumn::Source::Base,
                   c.at("index").get<std::size_t>(), c.at("class").get<std::size_t>(),
                   c.at("label").get<std::string>()});
  }
  return out;
}

StackingModel stacking_from_json(const nlohmann::json& j) {
  try {
    StackingModel m;
    m.base_names = j.at("bases").get<std::vector<std::string>>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.n_classes = j.at("n_classes").get<std::size_t>();
    m.n_folds = j.at("n_folds").get<std::size_t>();
    m.mode = meta_mode_from_string(j.at("meta_features").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.layout = layout_from_json(j);
    for (const auto& b : j.at("base_models")) m.base_models.push_back(classifier_from_json(b));
    m.meta_model = forest_from_json(j.at("meta_model"));
    if (m.base_models.size() != m.base_names.size()) throw DataError("stacking model: base count mismatch");
    for (const auto& col : m.layout)
      if (col.source == MetaColumn::Source::Base && (col.index >= m.base_models.size() || col.cls >= m.n_classes))
        throw DataError("stacking model: layout references a missing base column");
    if (m.meta_model.n_features != m.layout.size()) throw DataError("stacking model: meta width does not match layout");
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("stacking model: ") + e.what());
  }
}

namespace {

class StackingClassifier final : public Classifier {
 public:
  explicit StackingClassifier(StackingModel m) : model_(std::move(m)) {}
  std::string_view kind() const override { return "stacking"; }
  std::size_t n_features() const override { return model_.n_features; }
  std::size_t n_classes() const override { return model_.n_classes; }
  Matrix predict_proba(const Matrix& X) const override { return predict_stacking(model_, X); }
  json to_json() const override {
    json j = layout_to_json(model_);
    json bases = json::array();
    for (const auto& b : model_.base_models) bases.push_back(b->to_json());
    j["base_models"] = std::move(bases);
    j["meta_model"] = forest_to_json(model_.meta_model);
    return j;
  }

 private:
  StackingModel model_;
};

}  // namespace

std::unique_ptr<Classifier> wrap(StackingModel model) {
  return std::make_unique<StackingClassifier>(std::move(model));
}

}  // namespace credstack
