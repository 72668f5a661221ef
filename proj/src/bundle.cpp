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

#include "credstack/bundle.hpp"

#include <algorithm>
#include <filesystem>

#include "credstack/error.hpp"
#include "credstack/table.hpp"

namespace credstack {

using nlohmann::json;
namespace fs = std::filesystem;

Matrix Bundle::predict_proba(const Matrix& X) const {
  if (stacking) return predict_stacking(*stacking, X);
  if (!single) throw DataError("bundle '" + name + "' holds no model");
  return single->predict_proba(X);
}

PreparedInput prepare_input(const Bundle& b, const Table& raw) {
  PreparedInput out;
  const Table t = b.recipe ? apply_recipe(raw, *b.recipe, &out.warnings) : raw;
  const std::string label = b.recipe ? b.recipe->label_column : std::string();
  out.features = Matrix(t.row_count(), b.feature_names.size());
  for (std::size_t j = 0; j < b.feature_names.size(); ++j) {
    const auto idx = t.find_column(b.feature_names[j]);
    if (!idx) throw DataError("missing column '" + b.feature_names[j] + "'");
    const auto& cells = t.column(*idx);
    for (std::size_t r = 0; r < t.row_count(); ++r) {
      std::optional<double> v;
      if (is_number(cells[r])) v = std::get<double>(cells[r]);
      else if (is_text(cells[r])) v = parse_numeric(std::get<std::string>(cells[r]));
      if (!v) throw DataError("column '" + b.feature_names[j] + "' is not numeric at row " + std::to_string(r + 1));
      out.features(r, j) = *v;
    }
  }
  if (!label.empty()) {
    if (const auto idx = t.find_column(label)) {
      std::vector<int> labels;
      const auto& cells = t.column(*idx);
      for (std::size_t r = 0; r < t.row_count(); ++r) {
        if (!is_text(cells[r])) throw DataError("missing label at row " + std::to_string(r + 1));
        const auto& name = std::get<std::string>(cells[r]);
        const auto it = std::find(b.class_names.begin(), b.class_names.end(), name);
        if (it == b.class_names.end()) throw DataError("unknown class '" + name + "'");
        labels.push_back(static_cast<int>(it - b.class_names.begin()));
      }
      out.labels = std::move(labels);
    }
  }
  return out;
}

json recipe_to_json(const CleaningRecipe& r) {
  json cols = json::array();
  for (const auto& c : r.columns) {
    json col = {{"name", c.name}, {"kind", std::string(to_string(c.kind))}};
    if (c.kind == ColumnKind::Numeric) col["mean"] = c.mean;
    if (c.kind == ColumnKind::Categorical) col["categories"] = c.codebook.values;
    cols.push_back(std::move(col));
  }
  return {{"format_version", kModelFormatVersion},
          {"label_column", r.label_column},
          {"class_order", r.class_order},
          {"columns", std::move(cols)}};
}

CleaningRecipe recipe_from_json(const json& j) {
  try {
    CleaningRecipe r;
    r.label_column = j.at("label_column").get<std::string>();
    r.class_order = j.at("class_order").get<std::vector<std::string>>();
    for (const auto& c : j.at("columns")) {
      ColumnRecipe col;
      col.name = c.at("name").get<std::string>();
      col.kind = column_kind_from_string(c.at("kind").get<std::string>());
      if (col.kind == ColumnKind::Numeric) col.mean = c.at("mean").get<double>();
      if (col.kind == ColumnKind::Categorical) col.codebook.values = c.at("categories").get<std::vector<std::string>>();
      r.columns.push_back(std::move(col));
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("cleaning recipe: ") + e.what());
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_bundle(const std::string& dir, const Bundle& b) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create bundle directory " + dir + ": " + ec.message());
  const fs::path root(dir);

  json index = {{"format_version", kModelFormatVersion},
                {"name", b.name},
                {"feature_names", b.feature_names},
                {"class_names", b.class_names}};
  json files = json::array();
  if (b.stacking) {
    index["kind"] = "stacking";
    write_file((root / "layout.json").string(), dump_json(layout_to_json(*b.stacking)));
    files.push_back("layout.json");
    for (std::size_t i = 0; i < b.stacking->base_models.size(); ++i) {
      const std::string f = "base_" + std::to_string(i) + ".json";
      write_file((root / f).string(), dump_json(b.stacking->base_models[i]->to_json()));
      files.push_back(f);
    }
    write_file((root / "meta.json").string(), dump_json(forest_to_json(b.stacking->meta_model)));
    files.push_back("meta.json");
  } else {
    if (!b.single) throw DataError("bundle '" + b.name + "' holds no model");
    index["kind"] = "single";
    write_file((root / "model.json").string(), dump_json(b.single->to_json()));
    files.push_back("model.json");
  }
  if (b.recipe) {
    write_file((root / "cleaning.json").string(), dump_json(recipe_to_json(*b.recipe)));
    files.push_back("cleaning.json");
  }
  index["files"] = std::move(files);
  write_file((root / "bundle.json").string(), dump_json(index));
}

Bundle read_bundle(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::exists(root / "bundle.json")) throw DataError(dir + ": not a model bundle (no bundle.json)");
  try {
    const json index = read_json_file((root / "bundle.json").string());
    if (index.at("format_version").get<int>() != kModelFormatVersion)
      throw DataError(dir + ": unsupported bundle format_version");
    Bundle b;
    b.name = index.at("name").get<std::string>();
    b.feature_names = index.at("feature_names").get<std::vector<std::string>>();
    b.class_names = index.at("class_names").get<std::vector<std::string>>();
    const auto kind = index.at("kind").get<std::string>();
    if (kind == "stacking") {
      json j = read_json_file((root / "layout.json").string());
      json bases = json::array();
      for (std::size_t i = 0; i < j.at("bases").size(); ++i)
        bases.push_back(read_json_file((root / ("base_" + std::to_string(i) + ".json")).string()));
      j["base_models"] = std::move(bases);
      j["meta_model"] = read_json_file((root / "meta.json").string());
      b.stacking = stacking_from_json(j);
    } else if (kind == "single") {
      b.single = classifier_from_json(read_json_file((root / "model.json").string()));
    } else {
      throw DataError(dir + ": unknown bundle kind '" + kind + "'");
    }
    if (fs::exists(root / "cleaning.json")) b.recipe = recipe_from_json(read_json_file((root / "cleaning.json").string()));
    return b;
  } catch (const json::exception& e) {
    throw DataError(dir + ": " + e.what());
  }
}

}  // namespace credstack
