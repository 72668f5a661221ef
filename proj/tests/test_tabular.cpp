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


#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "credstack/cleaning.hpp"
#include "credstack/error.hpp"
#include "credstack/random.hpp"
#include "credstack/table.hpp"
#include "doctest.h"

using namespace credstack;

namespace {

std::vector<Cell> nums(std::initializer_list<double> v) { return {v.begin(), v.end()}; }

double as_num(const Cell& c) { return std::get<double>(c); }

}  // namespace

TEST_SUITE("tabular") {
  TEST_CASE("parse_csv reads text cells") {
    const Table t = parse_csv("a,b\n1,2\n");
    REQUIRE(t.column_names() == std::vector<std::string>{"a", "b"});
    REQUIRE(t.row_count() == 1);
    CHECK(t.column(0)[0] == Cell(std::string("1")));
    CHECK(t.column(1)[0] == Cell(std::string("2")));
  }

  TEST_CASE("parse_csv maps empty fields to Missing") {
    const Table t = parse_csv("a,b\n1,\n");
    CHECK(is_missing(t.column("b")[0]));
  }

  TEST_CASE("parse_csv rejects ragged rows with the line number") {
    CHECK_THROWS_WITH_AS(parse_csv("a,b\n1,2,3\n"), "row 1: expected 2 fields, got 3", DataError);
    CHECK_THROWS_AS(parse_csv(""), DataError);
  }

  TEST_CASE("parse_csv handles quoting, CRLF and BOM") {
    const Table t = parse_csv("\xEF\xBB\xBFname,v\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"\",3\r\n");
    REQUIRE(t.row_count() == 2);
    CHECK(t.column_names()[0] == "name");
    CHECK(t.column(0)[0] == Cell(std::string("x, y")));
    CHECK(t.column(1)[0] == Cell(std::string("say \"hi\"")));
    // A quoted empty field is empty text, not Missing.
    CHECK(t.column(0)[1] == Cell(std::string("")));
  }

  TEST_CASE("serialize then parse is the identity on text tables") {
    Rng rng(11);
    const std::vector<std::string> pool{"a", "b,c", "q\"t", " sp ", "", "12", "-3.5"};
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t cols = 1 + rng.uniform_index(4), rows = rng.uniform_index(6);
      std::vector<std::string> names;
      std::vector<std::vector<Cell>> data(cols);
      for (std::size_t c = 0; c < cols; ++c) {
        names.push_back("col" + std::to_string(c));
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t pick = rng.uniform_index(pool.size() + 1);
          if (pick == pool.size())
            data[c].emplace_back(Missing{});
          else
            data[c].emplace_back(pool[pick]);
        }
      }
      const Table t(names, data, rows);
      CHECK(parse_csv(serialize_csv(t)) == t);
    }
  }

  TEST_CASE("coerce_numeric parses, strips an underscore, and drops junk") {
    const Table t({"v"}, {{Cell(std::string("23")), Cell(std::string("abc")), Cell(std::string("345_")),
                           Cell(std::string(" 7 ")), Cell(Missing{})}});
    const Table c = coerce_numeric(t, "v");
    CHECK(c.column(0)[0] == Cell(23.0));
    CHECK(is_missing(c.column(0)[1]));
    CHECK(c.column(0)[2] == Cell(345.0));
    CHECK(c.column(0)[3] == Cell(7.0));
    CHECK(is_missing(c.column(0)[4]));
    CHECK_THROWS_AS(coerce_numeric(t, "nope"), DataError);
  }

  TEST_CASE("parse_numeric rejects partial and non-finite text") {
    CHECK(!parse_numeric("12abc"));
    CHECK(!parse_numeric("nan"));
    CHECK(!parse_numeric("inf"));
    CHECK(!parse_numeric("1__"));
    CHECK(parse_numeric("-0.25").value() == -0.25);
  }

  TEST_CASE("impute_mean fills with the observed mean") {
    const Table t({"x", "y"}, {{Cell(1.0), Cell(Missing{}), Cell(3.0)}, nums({5, 5, 5})});
    const auto [out, report] = impute_mean(t);
    CHECK(out.column(0)[1] == Cell(2.0));
    REQUIRE(report.find("x"));
    CHECK(report.find("x")->imputed_cells == 1);
    CHECK(report.find("x")->mean.value() == 2.0);
    CHECK(report.find("y")->imputed_cells == 0);
    CHECK(out.column(1) == t.column(1));
  }

  TEST_CASE("impute_mean rejects a column without observations") {
    const Table t({"X"}, {{Cell(Missing{}), Cell(Missing{})}});
    CHECK_THROWS_WITH_AS(impute_mean(t), "column X has no observed values", DataError);
  }

  TEST_CASE("impute_mean preserves column means and removes all gaps") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 2 + rng.uniform_index(30);
      std::vector<Cell> cells;
      double sum = 0.0;
      std::size_t seen = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && rng.uniform01() < 0.3) {
          cells.emplace_back(Missing{});
        } else {
          const double v = std::round(rng.normal() * 1000.0) / 8.0;
          cells.emplace_back(v);
          sum += v;
          ++seen;
        }
      }
      const Table t({"x", "label"}, {cells, std::vector<Cell>(n, Cell(std::string("Good")))});
      const auto [out, report] = impute_mean(t, {"label"});
      double after = 0.0;
      for (const Cell& c : out.column(0)) after += as_num(c);
      const double m_obs = sum / static_cast<double>(seen);
      const double m_all = after / static_cast<double>(n);
      CHECK(std::abs(m_all - m_obs) <= 1e-12 * std::max(1.0, std::abs(m_obs)));
      const LabeledDataset ds = to_dataset(out, "label");
      for (double v : ds.features.values()) CHECK(std::isfinite(v));
    }
  }

  TEST_CASE("encode_categorical codes by first appearance with a Missing code") {
    const Table t({"c"}, {{Cell(std::string("low")), Cell(std::string("high")), Cell(std::string("low"))}});
    CHECK(encode_categorical(t, "c").column(0) == nums({0, 1, 0}));
    const Table m({"c"}, {{Cell(std::string("a")), Cell(Missing{}), Cell(std::string("b"))}});
    CHECK(encode_categorical(m, "c").column(0) == nums({0, 2, 1}));
    const Table e({"c"}, {{}});
    CHECK(encode_categorical(e, "c").column(0).empty());
  }

  TEST_CASE("encode_categorical is injective and stable under duplication") {
    Rng rng(5);
    const std::vector<std::string> pool{"p", "q", "r", "s", "t"};
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Cell> cells;
      const std::size_t n = 1 + rng.uniform_index(20);
      for (std::size_t i = 0; i < n; ++i) cells.emplace_back(pool[rng.uniform_index(pool.size())]);
      const auto codes = encode_categorical(Table({"c"}, {cells}), "c").column(0);
      std::map<std::string, double> seen;
      std::set<double> used;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& s = std::get<std::string>(cells[i]);
        const double code = as_num(codes[i]);
        if (seen.count(s)) CHECK(seen[s] == code);
        else CHECK(used.insert(code).second);
        seen[s] = code;
      }
      std::vector<Cell> doubled;
      for (const Cell& c : cells) {
        doubled.push_back(c);
        doubled.push_back(c);
      }
      const auto codes2 = encode_categorical(Table({"c"}, {doubled}), "c").column(0);
      for (std::size_t i = 0; i < n; ++i) CHECK(codes2[2 * i] == codes[i]);
    }
  }

  TEST_CASE("to_dataset maps labels through the class order") {
    const Table t({"x", "Credit_Score"}, {nums({1, 2}), {Cell(std::string("Good")), Cell(std::string("Poor"))}});
    const LabeledDataset ds = to_dataset(t, "Credit_Score");
    CHECK(ds.labels == std::vector<int>{2, 0});
    CHECK(ds.feature_names == std::vector<std::string>{"x"});
    CHECK(ds.class_names == std::vector<std::string>{"Poor", "Standard", "Good"});

    const Table bad({"x", "Credit_Score"}, {nums({1}), {Cell(std::string("Excellent"))}});
    CHECK_THROWS_WITH_AS(to_dataset(bad, "Credit_Score"), "unknown class 'Excellent'", DataError);
    const Table gap({"x", "Credit_Score"}, {{Cell(Missing{})}, {Cell(std::string("Good"))}});
    CHECK_THROWS_AS(to_dataset(gap, "Credit_Score"), DataError);
  }

  TEST_CASE("clean_table produces a dense table and replays through its recipe") {
    const Table raw = parse_csv(
        "Age,Job,Income,Credit_Score\n"
        "23,eng,100_,Good\n"
        "x,doc,,Poor\n"
        "40,,300,Standard\n"
        "31,eng,200,Good\n");
    CleaningOptions opt;
    const CleanResult res = clean_table(raw, opt);
    const LabeledDataset ds = to_dataset(res.table, "Credit_Score");
    CHECK(ds.size() == 4);
    CHECK(ds.feature_names == std::vector<std::string>{"Age", "Job", "Income"});
    CHECK(ds.features(1, 0) == doctest::Approx((23.0 + 40 + 31) / 3).epsilon(1e-15));
    CHECK(ds.features(2, 1) == 2.0);  // Missing code after eng, doc
    CHECK(ds.features(1, 2) == 200.0);
    CHECK(res.report.find("Age")->coerced_cells == 1);

    std::vector<std::string> warnings;
    const Table replay = apply_recipe(raw, res.recipe, &warnings);
    CHECK(replay == res.table);
    CHECK(warnings.empty());

    const Table unseen = parse_csv("Age,Job,Income\n50,pilot,10\n");
    const Table u = apply_recipe(unseen, res.recipe, &warnings);
    CHECK(u.column("Job")[0] == Cell(2.0));
    CHECK(warnings.size() == 1);

    const Table missing = parse_csv("Age,Income\n50,10\n");
    CHECK_THROWS_WITH_AS(apply_recipe(missing, res.recipe, &warnings), "missing column 'Job'", DataError);
  }

  TEST_CASE("cleaning its own output is byte-identical") {
    const Table raw = parse_csv(
        "a,b,Credit_Score\n"
        "1.5,u,Good\n"
        ",v,Poor\n"
        "2.25_,,Standard\n");
    const CleanResult once = clean_table(raw, {});
    const std::string first = serialize_csv(once.table);
    const CleanResult twice = clean_table(parse_csv(first), {});
    CHECK(serialize_csv(twice.table) == first);
  }
}
