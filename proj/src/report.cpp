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

#include "credstack/report.hpp"

#include <algorithm>
#include <cstdio>

#include "credstack/cleaning.hpp"
#include "credstack/error.hpp"
#include "credstack/table.hpp"

namespace credstack {

namespace {

const std::vector<std::string> kHeaders = {"Model", "F1 Score", "Recall", "Precision", "ROC AUC"};

std::vector<std::string> cells_of(const ReportRow& r) {
  return {r.model, format4(r.f1), format4(r.recall), format4(r.precision),
          r.roc_auc ? format4(*r.roc_auc) : std::string("N/A")};
}

std::string pad(std::string s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

}  // namespace

ReportRow to_row(const MetricsReport& r) { return {r.model_name, r.f1, r.recall, r.precision, r.roc_auc}; }

std::vector<ReportRow> to_rows(const std::vector<MetricsReport>& reports) {
  std::vector<ReportRow> out;
  for (const auto& r : reports) out.push_back(to_row(r));
  return out;
}

std::string format4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string render_text(std::string_view title, const std::vector<ReportRow>& rows) {
  std::vector<std::size_t> width;
  for (const auto& h : kHeaders) width.push_back(h.size());
  for (const auto& r : rows) {
    const auto cells = cells_of(r);
    for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += "  ";
      out += pad(cells[i], width[i], i > 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out;
  if (!title.empty()) out += std::string(title) + "\n";
  out += line(kHeaders);
  std::size_t total = 2 * (width.size() - 1);
  for (std::size_t w : width) total += w;
  out += std::string(total, '-') + "\n";
  for (const auto& r : rows) out += line(cells_of(r));
  return out;
}

std::string render_markdown(std::string_view title, const std::vector<ReportRow>& rows) {
  std::string out;
  if (!title.empty()) out += "### " + std::string(title) + "\n\n";
  out += "| Model | F1 Score | Recall | Precision | ROC AUC |\n";
  out += "|---|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    out += "|";
    for (const auto& c : cells_of(r)) out += " " + c + " |";
    out += "\n";
  }
  return out;
}

std::string render_csv(const std::vector<ReportRow>& rows) {
  std::vector<std::string> names = {"model", "f1", "recall", "precision", "roc_auc"};
  std::vector<std::vector<Cell>> cols(names.size());
  for (const auto& r : rows) {
    const auto cells = cells_of(r);
    for (std::size_t i = 0; i < cells.size(); ++i) cols[i].push_back(Cell{cells[i]});
  }
  return serialize_csv(Table(names, std::move(cols), rows.size()));
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
  const Table t = parse_csv(text);
  for (const char* name : {"model", "f1", "recall", "precision", "roc_auc"})
    if (!t.find_column(name)) throw DataError(std::string("report csv: missing column '") + name + "'");
  auto number = [&](const Cell& c, const char* col, std::size_t row) {
    std::optional<double> v;
    if (is_number(c)) v = std::get<double>(c);
    if (is_text(c)) v = parse_numeric(std::get<std::string>(c));
    if (!v) throw DataError(std::string("report csv: column '") + col + "' is not numeric at row " +
                            std::to_string(row + 1));
    return *v;
  };
  std::vector<ReportRow> out;
  const auto& model = t.column("model");
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    ReportRow row;
    const Cell& m = model[r];
    row.model = is_text(m) ? std::get<std::string>(m) : is_number(m) ? format_number(std::get<double>(m)) : "";
    row.f1 = number(t.column("f1")[r], "f1", r);
    row.recall = number(t.column("recall")[r], "recall", r);
    row.precision = number(t.column("precision")[r], "precision", r);
    const Cell& auc = t.column("roc_auc")[r];
    if (!(is_text(auc) && std::get<std::string>(auc) == "N/A") && !is_missing(auc))
      row.roc_auc = number(auc, "roc_auc", r);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace credstack
