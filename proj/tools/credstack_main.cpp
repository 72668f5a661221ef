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

// credstack command-line tool.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 internal.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "credstack/bundle.hpp"
#include "credstack/cleaning.hpp"
#include "credstack/config.hpp"
#include "credstack/error.hpp"
#include "credstack/metrics.hpp"
#include "credstack/parallel.hpp"
#include "credstack/pipeline.hpp"
#include "credstack/preprocess.hpp"
#include "credstack/random.hpp"
#include "credstack/report.hpp"
#include "credstack/synthetic.hpp"
#include "credstack/table.hpp"

namespace cs = credstack;

namespace {

struct CleanArgs {
  std::string input, output, report, recipe, label = "Credit_Score";
  std::vector<std::string> drop, numeric, categorical;
};

struct ResampleArgs {
  std::string input, output, provenance, method = "smoteenn", label = "Credit_Score";
  std::size_t smote_k = 5, enn_k = 3;
  std::optional<std::uint64_t> seed;
};

struct TrainArgs {
  std::string input, ensemble, out, model, meta_features;
  std::optional<std::uint64_t> seed;
};

struct BundleArgs {
  std::string bundle, input, output, name, average = "macro";
};

struct RunArgs {
  std::string config, output_dir, meta_features, average;
  std::optional<std::uint64_t> seed;
  std::optional<double> z, iqr, test_fraction;
  bool before_split = false;
};

struct RenderArgs {
  std::string input, format = "text", title;
};

struct SynthArgs {
  std::string output;
  std::size_t rows = 5000;
  std::uint64_t seed = 1;
};

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string fmt(double v) { return cs::format_number(v); }

int cmd_clean(const CleanArgs& a) {
  const cs::Table raw = cs::parse_csv(cs::read_file(a.input));
  cs::CleaningOptions opt;
  opt.label_column = a.label;
  opt.drop = a.drop;
  opt.force_numeric = a.numeric;
  opt.force_categorical = a.categorical;
  const cs::CleanResult res = cs::clean_table(raw, opt);
  cs::write_file(a.output, cs::serialize_csv(res.table));
  const std::string report = a.report.empty() ? a.output + ".report.txt" : a.report;
  cs::write_file(report, res.report.to_key_values());
  if (!a.recipe.empty()) cs::write_file(a.recipe, cs::dump_json(cs::recipe_to_json(res.recipe)));
  return 0;
}

int cmd_resample(const ResampleArgs& a) {
  cs::check_resample_method(a.method);
  if (a.method != "none" && a.method != "enn" && !a.seed)
    throw cs::UsageError("--seed is required for method '" + a.method + "'");
  const cs::Table t = cs::parse_csv(cs::read_file(a.input));
  cs::CleaningOptions opt;
  opt.label_column = a.label;
  const cs::LabeledDataset ds = cs::to_dataset(cs::clean_table(t, opt).table, a.label);
  const cs::ResampleOutcome out = cs::resample_dataset(ds, a.method, {a.smote_k, a.enn_k, a.seed.value_or(0)});
  warn_all(out.warnings);

  std::vector<std::string> names = out.data.feature_names;
  names.push_back(a.label);
  std::vector<std::vector<cs::Cell>> cols(names.size());
  for (std::size_t r = 0; r < out.data.size(); ++r) {
    for (std::size_t j = 0; j < out.data.n_features(); ++j) cols[j].push_back(cs::Cell{out.data.features(r, j)});
    cols.back().push_back(cs::Cell{out.data.class_names[static_cast<std::size_t>(out.data.labels[r])]});
  }
  cs::write_file(a.output, cs::serialize_csv(cs::Table(names, std::move(cols), out.data.size())));

  const std::string prov = a.provenance.empty() ? a.output + ".provenance.csv" : a.provenance;
  std::string text = "row,seed_row,neighbor_row,u\n";
  for (std::size_t r = 0; r < out.provenance.size(); ++r)
    if (const auto& p = out.provenance[r])
      text += std::to_string(r) + "," + std::to_string(p->seed_row) + "," + std::to_string(p->neighbor_row) + "," +
              fmt(p->u) + "\n";
  cs::write_file(prov, text);
  std::cout << out.summary.to_key_values();
  return 0;
}

int cmd_train(const TrainArgs& a) {
  cs::KeyValueConfig kv = cs::KeyValueConfig::load(a.ensemble);
  if (a.seed) kv.set("seed", std::to_string(*a.seed));
  if (!a.meta_features.empty()) kv.set("ensemble.meta_features", a.meta_features);
  const bool resample = kv.has("resample.method");
  if (!kv.has("input")) kv.set("input", a.input);
  cs::PipelineConfig cfg = cs::pipeline_config_from(kv, std::filesystem::path(a.ensemble).parent_path().string());
  if (!a.input.empty()) cfg.input = a.input;
  if (cfg.input.empty()) throw cs::UsageError("train: --input is required");

  const cs::Table raw = cs::parse_csv(cs::read_file(cfg.input));
  cs::CleanResult cleaned = cs::clean_table(raw, cfg.cleaning);
  cs::LabeledDataset ds = cs::to_dataset(cleaned.table, cfg.cleaning.label_column, cfg.cleaning.class_order);
  if (cfg.zscore.enabled) ds = cs::zscore_filter(ds, cfg.zscore.value, cfg.zscore.columns).data;
  if (cfg.iqr.enabled) ds = cs::iqr_filter(ds, cfg.iqr.value, cfg.iqr.columns).data;
  if (resample) {
    auto out = cs::resample_dataset(ds, cfg.resample_method,
                                    {cfg.smote_k, cfg.enn_k, cs::derive_seed(cfg.seed, {2, 0})});
    warn_all(out.warnings);
    ds = std::move(out.data);
  }

  cs::Bundle bundle;
  bundle.recipe = cleaned.recipe;
  bundle.feature_names = ds.feature_names;
  bundle.class_names = ds.class_names;
  if (!a.model.empty()) {
    const auto it = std::find_if(cfg.roster.begin(), cfg.roster.end(),
                                 [&](const cs::RosterEntry& e) { return e.spec.name == a.model; });
    if (it == cfg.roster.end()) throw cs::UsageError("train: no base model named '" + a.model + "'");
    bundle.name = a.model;
    bundle.single = cs::make_learner(it->spec)->fit(
        ds, cs::derive_seed(cfg.seed, {3, static_cast<std::uint64_t>(it - cfg.roster.begin())}));
  } else {
    std::vector<cs::NamedLearner> bases;
    for (const auto& e : cfg.roster)
      if (e.stack) bases.push_back({e.spec.name, cs::make_learner(e.spec)});
    bundle.name = cfg.ensemble_name;
    bundle.stacking = cs::fit_stacking(ds, bases, cfg.stacking, cs::derive_seed(cfg.seed, {4}));
  }
  cs::write_bundle(a.out, bundle);
  std::cout << "wrote bundle '" << bundle.name << "' to " << a.out << " (" << ds.size() << " training rows)\n";
  return 0;
}

int cmd_evaluate(const BundleArgs& a) {
  const cs::Bundle b = cs::read_bundle(a.bundle);
  const cs::PreparedInput in = cs::prepare_input(b, cs::parse_csv(cs::read_file(a.input)));
  warn_all(in.warnings);
  if (!in.labels) throw cs::DataError("evaluate: input has no label column");
  const auto rep = cs::evaluate_probabilities(a.name.empty() ? b.name : a.name, b.predict_proba(in.features),
                                              *in.labels, b.class_names.size(), cs::averaging_from_string(a.average));
  const std::vector<cs::ReportRow> rows = {cs::to_row(rep)};
  std::cout << cs::render_text("", rows);
  if (!a.output.empty()) cs::write_file(a.output, cs::render_csv(rows));
  return 0;
}

int cmd_predict(const BundleArgs& a) {
  const cs::Bundle b = cs::read_bundle(a.bundle);
  const cs::PreparedInput in = cs::prepare_input(b, cs::parse_csv(cs::read_file(a.input)));
  warn_all(in.warnings);
  const cs::Matrix p = b.predict_proba(in.features);
  const auto pred = cs::argmax_rows(p);
  std::string text = "row";
  for (const auto& c : b.class_names) text += ",p_" + c;
  text += ",label\n";
  for (std::size_t r = 0; r < p.rows(); ++r) {
    text += std::to_string(r);
    for (std::size_t c = 0; c < p.cols(); ++c) text += "," + fmt(p(r, c));
    text += "," + b.class_names[static_cast<std::size_t>(pred[r])] + "\n";
  }
  if (a.output.empty()) std::cout << text;
  else cs::write_file(a.output, text);
  return 0;
}

int cmd_run(const RunArgs& a, std::size_t threads) {
  cs::KeyValueConfig kv = cs::KeyValueConfig::load(a.config);
  if (a.seed) kv.set("seed", std::to_string(*a.seed));
  if (a.z) kv.set("filter.zscore.threshold", fmt(*a.z));
  if (a.iqr) kv.set("filter.iqr.multiplier", fmt(*a.iqr));
  if (a.test_fraction) kv.set("split.test_fraction", fmt(*a.test_fraction));
  if (a.before_split) kv.set("resample.before_split", "true");
  if (!a.meta_features.empty()) kv.set("ensemble.meta_features", a.meta_features);
  if (!a.average.empty()) kv.set("metrics.average", a.average);
  cs::PipelineConfig cfg = cs::pipeline_config_from(kv, std::filesystem::path(a.config).parent_path().string());
  if (threads > 0) cfg.threads = threads;
  std::string out = a.output_dir.empty() ? cfg.output_dir : a.output_dir;
  if (out.empty()) out = "credstack_out";
  const cs::RunResult res = cs::run_and_write(cfg, out);
  for (std::size_t i = 0; i < res.variants.size(); ++i) {
    if (i) std::cout << "\n";
    std::cout << cs::render_text(res.variants[i].title, res.variants[i].table_rows());
  }
  for (const auto& v : res.variants) warn_all(v.warnings);
  std::cout << "\noutputs written to " << out << "\n";
  return 0;
}

int cmd_render(const RenderArgs& a) {
  const auto rows = cs::parse_report_csv(cs::read_file(a.input));
  if (a.format == "text") std::cout << cs::render_text(a.title, rows);
  else if (a.format == "markdown") std::cout << cs::render_markdown(a.title, rows);
  else if (a.format == "csv") std::cout << cs::render_csv(rows);
  else throw cs::UsageError("unknown format '" + a.format + "' (expected text, markdown or csv)");
  return 0;
}

int cmd_synth(const SynthArgs& a) {
  cs::SyntheticParams p;
  p.rows = a.rows;
  p.seed = a.seed;
  cs::write_file(a.output, cs::serialize_csv(cs::synthetic_table(p)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"credstack: credit-score classification pipeline"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = hardware)");

  CleanArgs clean;
  auto* c = app.add_subcommand("clean", "Coerce, impute and encode a raw CSV");
  c->add_option("input", clean.input)->required();
  c->add_option("output", clean.output)->required();
  c->add_option("--report", clean.report, "CleaningReport path (default <output>.report.txt)");
  c->add_option("--recipe", clean.recipe, "Write the fitted cleaning recipe as JSON");
  c->add_option("--label-column", clean.label);
  c->add_option("--drop", clean.drop)->delimiter(',');
  c->add_option("--numeric", clean.numeric)->delimiter(',');
  c->add_option("--categorical", clean.categorical)->delimiter(',');

  ResampleArgs rs;
  auto* r = app.add_subcommand("resample", "Resample a numeric labeled CSV");
  r->add_option("input", rs.input)->required();
  r->add_option("output", rs.output)->required();
  r->add_option("--method", rs.method)->check(CLI::IsMember({"none", "ros", "smote", "enn", "smoteenn"}));
  r->add_option("--smote-k", rs.smote_k)->check(CLI::PositiveNumber);
  r->add_option("--enn-k", rs.enn_k)->check(CLI::PositiveNumber);
  r->add_option("--seed", rs.seed);
  r->add_option("--provenance", rs.provenance, "Sidecar path (default <output>.provenance.csv)");
  r->add_option("--label-column", rs.label);

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Fit an ensemble (or one base) and write a model bundle");
  t->add_option("--ensemble", tr.ensemble, "Ensemble spec file")->required();
  t->add_option("--input", tr.input, "Training CSV (overrides the spec's input)");
  t->add_option("--out", tr.out, "Bundle directory")->required();
  t->add_option("--model", tr.model, "Train only the named base model");
  t->add_option("--seed", tr.seed);
  t->add_option("--meta-features", tr.meta_features)->check(CLI::IsMember({"oof", "in-sample"}));

  BundleArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score a labeled CSV with a bundle");
  e->add_option("--bundle", ev.bundle)->required();
  e->add_option("--input", ev.input)->required();
  e->add_option("--out", ev.output, "Also write the report row as CSV");
  e->add_option("--name", ev.name);
  e->add_option("--average", ev.average)->check(CLI::IsMember({"macro", "weighted"}));

  BundleArgs pr;
  auto* p = app.add_subcommand("predict", "Per-class probabilities and labels for a CSV");
  p->add_option("--bundle", pr.bundle)->required();
  p->add_option("--input", pr.input)->required();
  p->add_option("--out", pr.output, "Predictions CSV (default stdout)");

  RunArgs run;
  auto* ru = app.add_subcommand("run", "Full experiment from a config file");
  ru->add_option("config", run.config)->required();
  ru->add_option("--output-dir", run.output_dir);
  ru->add_option("--seed", run.seed);
  ru->add_option("--z-threshold", run.z);
  ru->add_option("--iqr-multiplier", run.iqr);
  ru->add_option("--test-fraction", run.test_fraction);
  ru->add_flag("--resample-before-split", run.before_split);
  ru->add_option("--meta-features", run.meta_features)->check(CLI::IsMember({"oof", "in-sample"}));
  ru->add_option("--average", run.average)->check(CLI::IsMember({"macro", "weighted"}));

  RenderArgs rr;
  auto* re = app.add_subcommand("render-report", "Render a report CSV as a table");
  re->add_option("input", rr.input)->required();
  re->add_option("--format", rr.format)->check(CLI::IsMember({"text", "markdown", "csv"}));
  re->add_option("--title", rr.title);

  SynthArgs sy;
  auto* s = app.add_subcommand("synth", "Write the synthetic benchmark as CSV");
  s->add_option("output", sy.output)->required();
  s->add_option("--rows", sy.rows);
  s->add_option("--seed", sy.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (threads > 0) cs::set_thread_count(threads);
    if (*c) return cmd_clean(clean);
    if (*r) return cmd_resample(rs);
    if (*t) return cmd_train(tr);
    if (*e) return cmd_evaluate(ev);
    if (*p) return cmd_predict(pr);
    if (*ru) return cmd_run(run, threads);
    if (*re) return cmd_render(rr);
    if (*s) return cmd_synth(sy);
    return 1;
  } catch (const cs::UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 1;
  } catch (const cs::DataError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 3;
  }
}
