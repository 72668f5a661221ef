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

#include "credstack/classifier.hpp"

#include <set>

#include "credstack/config.hpp"
#include "credstack/error.hpp"
#include "credstack/stacking.hpp"

namespace credstack {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", m.values()}}; }

Matrix matrix_from_json(const json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("values").get<std::vector<double>>());
}

json standardizer_to_json(const Standardizer& s) { return {{"mean", s.mean}, {"scale", s.scale}}; }

Standardizer standardizer_from_json(const json& j) {
  return {j.at("mean").get<std::vector<double>>(), j.at("scale").get<std::vector<double>>()};
}

json tree_params_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth},
          {"min_samples_leaf", p.min_samples_leaf},
          {"criterion", std::string(to_string(p.criterion))},
          {"feature_subsample", p.feature_subsample},
          {"max_leaves", p.max_leaves}};
}

TreeParams tree_params_from_json(const json& j) {
  TreeParams p;
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.criterion = criterion_from_string(j.at("criterion").get<std::string>());
  p.feature_subsample = j.at("feature_subsample").get<double>();
  p.max_leaves = j.at("max_leaves").get<std::size_t>();
  return p;
}

json tree_body(const TreeModel& t) {
  std::vector<int> feature, left, right;
  std::vector<double> threshold, gain;
  std::vector<std::size_t> samples;
  std::vector<std::vector<double>> value;
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    gain.push_back(n.gain);
    samples.push_back(n.samples);
    value.push_back(n.value);
  }
  return {{"n_features", t.n_features}, {"n_outputs", t.n_outputs}, {"params", tree_params_json(t.params)},
          {"feature", feature},         {"threshold", threshold},   {"left", left},
          {"right", right},             {"gain", gain},             {"samples", samples},
          {"value", value}};
}

TreeModel tree_from_body(const json& j) {
  TreeModel t;
  t.n_features = j.at("n_features").get<std::size_t>();
  t.n_outputs = j.at("n_outputs").get<std::size_t>();
  t.params = tree_params_from_json(j.at("params"));
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto gain = j.at("gain").get<std::vector<double>>();
  const auto samples = j.at("samples").get<std::vector<std::size_t>>();
  const auto value = j.at("value").get<std::vector<std::vector<double>>>();
  for (std::size_t i = 0; i < feature.size(); ++i)
    t.nodes.push_back(TreeNode{feature[i], threshold[i], left[i], right[i], gain[i], samples[i], value[i]});
  for (const auto& n : t.nodes)
    if (!n.is_leaf() && (n.left < 0 || n.right < 0 || static_cast<std::size_t>(n.left) >= t.nodes.size() ||
                         static_cast<std::size_t>(n.right) >= t.nodes.size()))
      throw DataError("model file: tree node points outside the tree");
  return t;
}

json header(std::string_view type) { return {{"format_version", kModelFormatVersion}, {"model_type", type}}; }

void check_header(const json& j, std::string_view type) {
  if (j.at("format_version").get<int>() != kModelFormatVersion)
    throw DataError("model file: unsupported format_version " + j.at("format_version").dump());
  if (j.at("model_type").get<std::string>() != type)
    throw DataError("model file: expected model_type '" + std::string(type) + "'");
}

json forest_params_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees}, {"bootstrap", p.bootstrap}, {"max_features", p.max_features},
          {"tree", tree_params_json(p.tree)}};
}

json boost_params_json(const BoostParams& p) {
  return {{"n_rounds", p.n_rounds},
          {"learning_rate", p.learning_rate},
          {"lambda", p.lambda},
          {"alpha", p.alpha},
          {"gamma", p.gamma},
          {"max_depth", p.max_depth},
          {"min_samples_leaf", p.min_samples_leaf},
          {"min_child_weight", p.min_child_weight},
          {"max_leaves", p.max_leaves},
          {"feature_subsample", p.feature_subsample}};
}

BoostParams boost_params_from_json(const json& j) {
  BoostParams p;
  p.n_rounds = j.at("n_rounds").get<std::size_t>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.lambda = j.at("lambda").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.min_child_weight = j.at("min_child_weight").get<double>();
  p.max_leaves = j.at("max_leaves").get<std::size_t>();
  p.feature_subsample = j.at("feature_subsample").get<double>();
  return p;
}

json logistic_params_json(const LogisticParams& p) {
  return {{"step", p.step}, {"max_iter", p.max_iter}, {"tolerance", p.tolerance}};
}

// --- per-model traits -------------------------------------------------------

struct TreeTraits {
  using Model = TreeModel;
  static constexpr std::string_view kind = "tree";
  static std::size_t features(const Model& m) { return m.n_features; }
  static std::size_t classes(const Model& m) { return m.n_outputs; }
  static Matrix predict(const Model& m, const Matrix& X) { return predict_tree(m, X); }
  static json to_json(const Model& m) { return tree_to_json(m); }
};

struct ForestTraits {
  using Model = ForestModel;
  static constexpr std::string_view kind = "forest";
  static std::size_t features(const Model& m) { return m.n_features; }
  static std::size_t classes(const Model& m) { return m.n_classes; }
  static Matrix predict(const Model& m, const Matrix& X) { return predict_forest(m, X); }
  static json to_json(const Model& m) { return forest_to_json(m); }
};

struct BoostTraits {
  using Model = BoostModel;
  static constexpr std::string_view kind = "gbdt";
  static std::size_t features(const Model& m) { return m.n_features; }
  static std::size_t classes(const Model& m) { return m.n_classes; }
  static Matrix predict(const Model& m, const Matrix& X) { return predict_gbdt(m, X); }
  static json to_json(const Model& m) {
    json j = header(kind);
    j["params"] = boost_params_json(m.params);
    j["n_features"] = m.n_features;
    j["n_classes"] = m.n_classes;
    j["base_score"] = m.base_score;
    j["train_loss"] = m.train_loss;
    json rounds = json::array();
    for (const auto& round : m.rounds) {
      json trees = json::array();
      for (const auto& t : round) trees.push_back(tree_body(t));
      rounds.push_back(std::move(trees));
    }
    j["rounds"] = std::move(rounds);
    return j;
  }
};

struct KnnTraits {
  using Model = KnnModel;
  static constexpr std::string_view kind = "knn";
  static std::size_t features(const Model& m) { return m.train.cols(); }
  static std::size_t classes(const Model& m) { return m.n_classes; }
  static Matrix predict(const Model& m, const Matrix& X) { return predict_knn(m, X); }
  static json to_json(const Model& m) {
    json j = header(kind);
    j["params"] = {{"k", m.k}};
    j["standardizer"] = standardizer_to_json(m.standardizer);
    j["train"] = matrix_to_json(m.train);
    j["labels"] = m.labels;
    j["n_classes"] = m.n_classes;
    return j;
  }
};

struct LogisticTraits {
  using Model = LogisticModel;
  static constexpr std::string_view kind = "logistic";
  static std::size_t features(const Model& m) { return m.standardizer.mean.size(); }
  static std::size_t classes(const Model& m) { return m.weights.rows(); }
  static Matrix predict(const Model& m, const Matrix& X) { return predict_logistic(m, X); }
  static json to_json(const Model& m) {
    json j = header(kind);
    j["params"] = logistic_params_json(m.params);
    j["standardizer"] = standardizer_to_json(m.standardizer);
    j["weights"] = matrix_to_json(m.weights);
    j["iterations"] = m.iterations;
    return j;
  }
};

struct PriorTraits {
  using Model = PriorModel;
  static constexpr std::string_view kind = "prior";
  static std::size_t features(const Model& m) { return m.n_features; }
  static std::size_t classes(const Model& m) { return m.priors.size(); }
  static Matrix predict(const Model& m, const Matrix& X) {
    if (X.cols() != m.n_features) throw DataError("prior: input width does not match the model");
    Matrix out(X.rows(), m.priors.size());
    for (std::size_t r = 0; r < X.rows(); ++r) std::copy(m.priors.begin(), m.priors.end(), out.row(r).begin());
    return out;
  }
  static json to_json(const Model& m) {
    json j = header(kind);
    j["params"] = json::object();
    j["priors"] = m.priors;
    j["n_features"] = m.n_features;
    return j;
  }
};

template <class Traits>
class ModelClassifier final : public Classifier {
 public:
  explicit ModelClassifier(typename Traits::Model m) : model_(std::move(m)) {}
  std::string_view kind() const override { return Traits::kind; }
  std::size_t n_features() const override { return Traits::features(model_); }
  std::size_t n_classes() const override { return Traits::classes(model_); }
  Matrix predict_proba(const Matrix& X) const override { return Traits::predict(model_, X); }
  json to_json() const override { return Traits::to_json(model_); }

 private:
  typename Traits::Model model_;
};

// --- learners ----------------------------------------------------------------

template <class Params, class Fit, class ParamsJson>
class FnLearner final : public Learner {
 public:
  FnLearner(std::string_view kind, Params p, Fit fit, ParamsJson pj)
      : kind_(kind), params_(std::move(p)), fit_(fit), params_json_(pj) {}
  std::string_view kind() const override { return kind_; }
  std::unique_ptr<Classifier> fit(const LabeledDataset& train, std::uint64_t seed) const override {
    return fit_(train, params_, seed);
  }
  json params_json() const override { return params_json_(params_); }

 private:
  std::string_view kind_;
  Params params_;
  Fit fit_;
  ParamsJson params_json_;
};

template <class Params, class Fit, class ParamsJson>
std::unique_ptr<Learner> make_fn_learner(std::string_view kind, Params p, Fit fit, ParamsJson pj) {
  return std::make_unique<FnLearner<Params, Fit, ParamsJson>>(kind, std::move(p), fit, pj);
}

// Consumes recognised keys; anything left over is a configuration error.
class ParamReader {
 public:
  ParamReader(const std::map<std::string, std::string>& params, std::string context)
      : params_(params), context_(std::move(context)) {}

  template <class F>
  void read(const std::string& key, F&& apply) {
    if (const auto it = params_.find(key); it != params_.end()) {
      apply(it->second, context_ + "." + key);
      used_.insert(key);
    }
  }

  void finish(const std::set<std::string>& also_allowed = {}) const {
    for (const auto& [key, _] : params_)
      if (!used_.count(key) && !also_allowed.count(key))
        throw UsageError(context_ + ": unknown parameter '" + key + "'");
  }

 private:
  const std::map<std::string, std::string>& params_;
  std::string context_;
  std::set<std::string> used_;
};

void read_tree_keys(ParamReader& r, TreeParams& p) {
  r.read("max_depth", [&](const std::string& v, const std::string& w) { p.max_depth = static_cast<int>(parse_size(v, w)); });
  r.read("min_samples_leaf", [&](const std::string& v, const std::string& w) { p.min_samples_leaf = parse_size(v, w); });
  r.read("criterion", [&](const std::string& v, const std::string&) { p.criterion = criterion_from_string(v); });
  r.read("feature_subsample", [&](const std::string& v, const std::string& w) { p.feature_subsample = parse_double(v, w); });
  r.read("max_leaves", [&](const std::string& v, const std::string& w) { p.max_leaves = parse_size(v, w); });
}

void read_forest_keys(ParamReader& r, ForestParams& p) {
  read_tree_keys(r, p.tree);
  r.read("n_trees", [&](const std::string& v, const std::string& w) { p.n_trees = parse_size(v, w); });
  r.read("bootstrap", [&](const std::string& v, const std::string& w) { p.bootstrap = parse_bool(v, w); });
  r.read("max_features", [&](const std::string& v, const std::string& w) { p.max_features = parse_size(v, w); });
}

}  // namespace

nlohmann::json tree_to_json(const TreeModel& tree) {
  json j = header("tree");
  j.update(tree_body(tree));
  return j;
}

TreeModel tree_from_json(const nlohmann::json& j) {
  check_header(j, "tree");
  return tree_from_body(j);
}

nlohmann::json forest_to_json(const ForestModel& f) {
  json j = header("forest");
  j["params"] = forest_params_json(f.params);
  j["n_features"] = f.n_features;
  j["n_classes"] = f.n_classes;
  j["tree_seeds"] = f.tree_seeds;
  json trees = json::array();
  for (const auto& t : f.trees) trees.push_back(tree_body(t));
  j["trees"] = std::move(trees);
  return j;
}

ForestModel forest_from_json(const nlohmann::json& j) {
  check_header(j, "forest");
  ForestModel f;
  const auto& p = j.at("params");
  f.params.n_trees = p.at("n_trees").get<std::size_t>();
  f.params.bootstrap = p.at("bootstrap").get<bool>();
  f.params.max_features = p.at("max_features").get<std::size_t>();
  f.params.tree = tree_params_from_json(p.at("tree"));
  f.n_features = j.at("n_features").get<std::size_t>();
  f.n_classes = j.at("n_classes").get<std::size_t>();
  f.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
  for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_body(t));
  return f;
}

std::unique_ptr<Classifier> wrap(TreeModel m) { return std::make_unique<ModelClassifier<TreeTraits>>(std::move(m)); }
std::unique_ptr<Classifier> wrap(ForestModel m) { return std::make_unique<ModelClassifier<ForestTraits>>(std::move(m)); }
std::unique_ptr<Classifier> wrap(BoostModel m) { return std::make_unique<ModelClassifier<BoostTraits>>(std::move(m)); }
std::unique_ptr<Classifier> wrap(KnnModel m) { return std::make_unique<ModelClassifier<KnnTraits>>(std::move(m)); }
std::unique_ptr<Classifier> wrap(LogisticModel m) {
  return std::make_unique<ModelClassifier<LogisticTraits>>(std::move(m));
}
std::unique_ptr<Classifier> wrap(PriorModel m) { return std::make_unique<ModelClassifier<PriorTraits>>(std::move(m)); }

std::unique_ptr<Learner> tree_learner(TreeParams params) {
  return make_fn_learner(
      "tree", params,
      [](const LabeledDataset& d, const TreeParams& p, std::uint64_t s) { return wrap(fit_tree(d, p, s)); },
      [](const TreeParams& p) { return tree_params_json(p); });
}

std::unique_ptr<Learner> forest_learner(ForestParams params) {
  return make_fn_learner(
      "forest", params,
      [](const LabeledDataset& d, const ForestParams& p, std::uint64_t s) { return wrap(fit_forest(d, p, s)); },
      [](const ForestParams& p) { return forest_params_json(p); });
}

std::unique_ptr<Learner> gbdt_learner(BoostParams params) {
  return make_fn_learner(
      "gbdt", params,
      [](const LabeledDataset& d, const BoostParams& p, std::uint64_t s) { return wrap(fit_gbdt(d, p, s)); },
      [](const BoostParams& p) { return boost_params_json(p); });
}

std::unique_ptr<Learner> knn_learner(std::size_t k) {
  return make_fn_learner(
      "knn", k, [](const LabeledDataset& d, std::size_t kk, std::uint64_t) { return wrap(fit_knn(d, kk)); },
      [](std::size_t kk) { return json{{"k", kk}}; });
}

std::unique_ptr<Learner> logistic_learner(LogisticParams params) {
  return make_fn_learner(
      "logistic", params,
      [](const LabeledDataset& d, const LogisticParams& p, std::uint64_t) { return wrap(fit_logistic(d, p)); },
      [](const LogisticParams& p) { return logistic_params_json(p); });
}

std::unique_ptr<Learner> prior_learner() {
  return make_fn_learner(
      "prior", 0,
      [](const LabeledDataset& d, int, std::uint64_t) {
        if (d.size() == 0) throw DataError("cannot fit a prior on an empty training set");
        PriorModel m;
        m.n_features = d.n_features();
        for (std::size_t c : d.class_counts()) m.priors.push_back(static_cast<double>(c) / static_cast<double>(d.size()));
        return wrap(std::move(m));
      },
      [](int) { return json::object(); });
}

TreeParams tree_params_from(const std::map<std::string, std::string>& params, TreeParams base) {
  ParamReader r(params, "tree");
  read_tree_keys(r, base);
  r.finish();
  return base;
}

ForestParams forest_params_from(const std::map<std::string, std::string>& params, ForestParams base) {
  ParamReader r(params, "forest");
  read_forest_keys(r, base);
  r.finish();
  return base;
}

std::unique_ptr<Learner> make_learner(const BaseSpec& spec) {
  const std::string context = spec.name.empty() ? spec.kind : spec.name;
  ParamReader r(spec.params, context);
  if (spec.kind == "tree") {
    TreeParams p;
    read_tree_keys(r, p);
    r.finish();
    return tree_learner(p);
  }
  if (spec.kind == "forest") {
    ForestParams p;
    read_forest_keys(r, p);
    r.finish();
    return forest_learner(p);
  }
  if (spec.kind == "gbdt") {
    BoostParams p;
    r.read("n_rounds", [&](const std::string& v, const std::string& w) { p.n_rounds = parse_size(v, w); });
    r.read("learning_rate", [&](const std::string& v, const std::string& w) { p.learning_rate = parse_double(v, w); });
    r.read("lambda", [&](const std::string& v, const std::string& w) { p.lambda = parse_double(v, w); });
    r.read("alpha", [&](const std::string& v, const std::string& w) { p.alpha = parse_double(v, w); });
    r.read("gamma", [&](const std::string& v, const std::string& w) { p.gamma = parse_double(v, w); });
    r.read("max_depth", [&](const std::string& v, const std::string& w) { p.max_depth = static_cast<int>(parse_size(v, w)); });
    r.read("min_samples_leaf", [&](const std::string& v, const std::string& w) { p.min_samples_leaf = parse_size(v, w); });
    r.read("min_child_weight", [&](const std::string& v, const std::string& w) { p.min_child_weight = parse_double(v, w); });
    r.read("max_leaves", [&](const std::string& v, const std::string& w) { p.max_leaves = parse_size(v, w); });
    r.read("feature_subsample", [&](const std::string& v, const std::string& w) { p.feature_subsample = parse_double(v, w); });
    r.finish();
    return gbdt_learner(p);
  }
  if (spec.kind == "knn") {
    std::size_t k = 5;
    r.read("k", [&](const std::string& v, const std::string& w) { k = parse_size(v, w); });
    r.finish();
    return knn_learner(k);
  }
  if (spec.kind == "logistic") {
    LogisticParams p;
    r.read("step", [&](const std::string& v, const std::string& w) { p.step = parse_double(v, w); });
    r.read("max_iter", [&](const std::string& v, const std::string& w) { p.max_iter = parse_size(v, w); });
    r.read("tolerance", [&](const std::string& v, const std::string& w) { p.tolerance = parse_double(v, w); });
    r.finish();
    return logistic_learner(p);
  }
  if (spec.kind == "prior") {
    r.finish();
    return prior_learner();
  }
  throw UsageError(context + ": unknown model kind '" + spec.kind + "'");
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("model_type").get<std::string>();
    if (type == "tree") return wrap(tree_from_json(j));
    if (type == "forest") return wrap(forest_from_json(j));
    if (type == "stacking") {
      check_header(j, type);
      return wrap(stacking_from_json(j));
    }
    check_header(j, type);
    if (type == "gbdt") {
      BoostModel m;
      m.params = boost_params_from_json(j.at("params"));
      m.n_features = j.at("n_features").get<std::size_t>();
      m.n_classes = j.at("n_classes").get<std::size_t>();
      m.base_score = j.at("base_score").get<std::vector<double>>();
      m.train_loss = j.at("train_loss").get<std::vector<double>>();
      for (const auto& round : j.at("rounds")) {
        std::vector<TreeModel> trees;
        for (const auto& t : round) trees.push_back(tree_from_body(t));
        m.rounds.push_back(std::move(trees));
      }
      return wrap(std::move(m));
    }
    if (type == "knn") {
      KnnModel m;
      m.k = j.at("params").at("k").get<std::size_t>();
      m.standardizer = standardizer_from_json(j.at("standardizer"));
      m.train = matrix_from_json(j.at("train"));
      m.labels = j.at("labels").get<std::vector<int>>();
      m.n_classes = j.at("n_classes").get<std::size_t>();
      return wrap(std::move(m));
    }
    if (type == "logistic") {
      LogisticModel m;
      const auto& p = j.at("params");
      m.params = {p.at("step").get<double>(), p.at("max_iter").get<std::size_t>(), p.at("tolerance").get<double>()};
      m.standardizer = standardizer_from_json(j.at("standardizer"));
      m.weights = matrix_from_json(j.at("weights"));
      m.iterations = j.at("iterations").get<std::size_t>();
      return wrap(std::move(m));
    }
    if (type == "prior") {
      PriorModel m;
      m.priors = j.at("priors").get<std::vector<double>>();
      m.n_features = j.at("n_features").get<std::size_t>();
      return wrap(std::move(m));
    }
    throw DataError("model file: unknown model_type '" + type + "'");
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

}  // namespace credstack
