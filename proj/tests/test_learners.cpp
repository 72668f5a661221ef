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


#include <algorithm>
#include <cmath>
#include <vector>

#include "credstack/classifier.hpp"
#include "credstack/error.hpp"
#include "credstack/forest.hpp"
#include "credstack/gbdt.hpp"
#include "credstack/knn.hpp"
#include "credstack/logistic.hpp"
#include "credstack/metrics.hpp"
#include "credstack/parallel.hpp"
#include "credstack/preprocess.hpp"
#include "credstack/tree.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace credstack;

namespace {

LabeledDataset line(const std::vector<double>& x, const std::vector<int>& y, std::size_t k = 2) {
  LabeledDataset ds;
  ds.features = Matrix(x.size(), 1, x);
  ds.labels = y;
  ds.feature_names = {"x"};
  ds.class_names = oracle::class_names(k);
  return ds;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<double> priors(const LabeledDataset& ds) {
  std::vector<double> p(ds.n_classes(), 0.0);
  for (int y : ds.labels) p[static_cast<std::size_t>(y)] += 1.0 / static_cast<double>(ds.size());
  return p;
}

void check_rows_equal(const Matrix& P, const std::vector<double>& want, double tol) {
  for (std::size_t r = 0; r < P.rows(); ++r)
    for (std::size_t c = 0; c < P.cols(); ++c) CHECK(std::abs(P(r, c) - want[c]) <= tol);
}

}  // namespace

TEST_SUITE("learners") {
  TEST_CASE("gini values") {
    CHECK(gini(std::vector<std::size_t>{10, 0, 0}) == 0.0);
    CHECK(gini(std::vector<std::size_t>{5, 5}) == 0.5);
    CHECK(gini(std::vector<std::size_t>{2, 1, 1}) == 0.625);
    CHECK(entropy(std::vector<std::size_t>{4, 4}) == 1.0);
    CHECK_THROWS_AS(gini(std::vector<std::size_t>{0, 0}), UsageError);
  }

  TEST_CASE("best_split picks the midpoint of the class gap") {
    const auto ds = line({1, 2, 9, 10}, {0, 0, 1, 1});
    const auto rows = iota(4);
    const std::vector<std::size_t> feats{0};
    const auto s = best_split(ds.features, ds.labels, 2, rows, feats, Criterion::Gini, 1);
    REQUIRE(s);
    CHECK(s->feature == 0);
    CHECK(s->threshold == 5.5);
    CHECK(s->decrease == 0.5);
  }

  TEST_CASE("best_split returns none for pure or constant nodes") {
    const auto rows = iota(4);
    const std::vector<std::size_t> feats{0};
    const auto pure = line({1, 2, 3, 4}, {1, 1, 1, 1});
    CHECK(!best_split(pure.features, pure.labels, 2, rows, feats, Criterion::Gini, 1));
    const auto flat = line({3, 3, 3, 3}, {0, 1, 0, 1});
    CHECK(!best_split(flat.features, flat.labels, 2, rows, feats, Criterion::Gini, 1));
  }

  TEST_CASE("best_split prefers the lowest feature on ties") {
    LabeledDataset ds;
    ds.features = Matrix(4, 2, {1, 1, 2, 2, 9, 9, 10, 10});
    ds.labels = {0, 0, 1, 1};
    const auto rows = iota(4);
    const std::vector<std::size_t> feats{0, 1};
    const auto s = best_split(ds.features, ds.labels, 2, rows, feats, Criterion::Gini, 1);
    REQUIRE(s);
    CHECK(s->feature == 0);
  }

  TEST_CASE("split_threshold stays inside the gap") {
    CHECK(split_threshold(1.0, 2.0) == 1.5);
    const double a = 1.0, b = std::nextafter(1.0, 2.0);
    const double t = split_threshold(a, b);
    CHECK(t >= a);
    CHECK(t < b);
    CHECK(split_threshold(-1e308, 1e308) < 1e308);
  }

  TEST_CASE("fit_tree examples") {
    TreeParams p;
    p.min_samples_leaf = 1;
    const auto ds = line({1, 2, 9, 10}, {0, 0, 1, 1});
    const auto tree = fit_tree(ds, p, 0);
    CHECK(tree.depth() == 1);
    CHECK(argmax_rows(predict_tree(tree, ds.features)) == ds.labels);

    TreeParams stump = p;
    stump.max_depth = 0;
    const auto leaf = fit_tree(line({1, 2, 3, 4}, {0, 0, 0, 1}), stump, 0);
    CHECK(leaf.nodes.size() == 1);
    CHECK(leaf.nodes[0].value == std::vector<double>{0.75, 0.25});

    CHECK_THROWS_AS(fit_tree(line({}, {}), p, 0), DataError);
  }

  TEST_CASE("fit_tree reaches perfect accuracy on separable 1-D data") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      x.push_back(i);
      y.push_back(i >= 17 ? 1 : 0);
    }
    const auto tree = fit_tree(line(x, y), {}, 3);
    CHECK(tree.depth() == 1);
    CHECK(oracle::accuracy(predict_tree(tree, line(x, y).features), y) == 1.0);
  }

  TEST_CASE("fit_tree matches exhaustive search at every node") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + rng.uniform_index(11), d = 1 + rng.uniform_index(3), k = 2 + rng.uniform_index(2);
      const auto ds = oracle::random_dataset(rng, n, d, k, trial % 2 == 0);
      TreeParams p;
      p.max_depth = static_cast<int>(rng.uniform_index(3));
      p.min_samples_leaf = 1 + rng.uniform_index(3);
      p.criterion = trial % 3 == 0 ? Criterion::Entropy : Criterion::Gini;
      const auto tree = fit_tree(ds, p, rng.next());
      const std::string err = oracle::check_tree(tree, ds.features, ds.labels, k, p);
      CHECK_MESSAGE(err.empty(), "trial ", trial, ": ", err);
    }
  }

  TEST_CASE("tree leaves are valid distributions and monotone scaling keeps splits") {
    const auto ds = fixture::moons3(5, 300);
    const auto tree = fit_tree(ds, {}, 1);
    for (const auto& node : tree.nodes)
      if (node.is_leaf()) {
        double s = 0.0;
        for (double v : node.value) s += v;
        CHECK(std::abs(s - 1.0) <= 1e-9);
      }
    auto scaled = ds;
    for (std::size_t r = 0; r < ds.size(); ++r) scaled.features(r, 0) = 3.0 * ds.features(r, 0) + 7.0;
    const auto t2 = fit_tree(scaled, {}, 1);
    CHECK(argmax_rows(predict_tree(t2, scaled.features)) == argmax_rows(predict_tree(tree, ds.features)));
  }

  TEST_CASE("a one-tree forest without bagging is the plain tree") {
    const auto ds = fixture::moons3(2, 200);
    ForestParams fp;
    fp.n_trees = 1;
    fp.bootstrap = false;
    fp.max_features = ds.n_features();
    const auto forest = fit_forest(ds, fp, 42);
    const auto tree = fit_tree(ds, fp.tree, 42);
    CHECK(forest.trees[0].nodes == tree.nodes);
    CHECK(predict_forest(forest, ds.features) == predict_tree(tree, ds.features));
  }

  TEST_CASE("forest predictions are distributions and independent of tree order") {
    const auto ds = fixture::moons3(3, 300);
    ForestParams fp;
    fp.n_trees = 25;
    auto forest = fit_forest(ds, fp, 9);
    const auto P = predict_forest(forest, ds.features);
    CHECK(oracle::distributions_valid(P));
    std::reverse(forest.trees.begin(), forest.trees.end());
    std::rotate(forest.trees.begin(), forest.trees.begin() + 7, forest.trees.end());
    const auto Q = predict_forest(forest, ds.features);
    for (std::size_t i = 0; i < P.values().size(); ++i) CHECK(std::abs(P.values()[i] - Q.values()[i]) <= 1e-12);
  }

  TEST_CASE("forest is not worse than a single tree on moons") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto train = fixture::moons3(100 + seed, 600);
      const auto test = fixture::moons3(200 + seed, 600);
      ForestParams fp;
      fp.n_trees = 100;
      const double acc_f = oracle::accuracy(predict_forest(fit_forest(train, fp, seed), test.features), test.labels);
      const double acc_t = oracle::accuracy(predict_tree(fit_tree(train, {}, seed), test.features), test.labels);
      CHECK_MESSAGE(acc_f >= acc_t - 0.02, "seed ", seed, ": forest ", acc_f, " tree ", acc_t);
    }
  }

  TEST_CASE("fits do not depend on the thread count") {
    const auto ds = fixture::moons3(8, 400);
    ForestParams fp;
    fp.n_trees = 12;
    BoostParams bp;
    bp.n_rounds = 10;
    set_thread_count(1);
    const auto f1 = fit_forest(ds, fp, 5);
    const auto b1 = fit_gbdt(ds, bp, 5);
    set_thread_count(4);
    const auto f4 = fit_forest(ds, fp, 5);
    const auto b4 = fit_gbdt(ds, bp, 5);
    set_thread_count(1);
    CHECK(f1 == f4);
    CHECK(b1 == b4);
    CHECK(fit_forest(ds, fp, 5) == f1);
  }

  TEST_CASE("gbdt leaf weight and gain formulas") {
    CHECK(leaf_weight(4.0, 2.0, 1.0, 1.0) == -1.0);
    CHECK(leaf_weight(-4.0, 2.0, 1.0, 1.0) == 1.0);
    CHECK(leaf_weight(0.5, 2.0, 1.0, 1.0) == 0.0);
    CHECK(soft_threshold(-3.0, 1.0) == -2.0);
    const double g = split_gain(2.0, 1.0, -2.0, 1.0, 1.0, 0.0, 0.0);
    CHECK(g == doctest::Approx(0.5 * (4.0 / 2.0 + 4.0 / 2.0 - 0.0)));
  }

  TEST_CASE("softmax gradient and hessian match finite differences") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t k = 2 + rng.uniform_index(4);
      std::vector<double> s(k);
      for (auto& v : s) v = 4.0 * rng.uniform01() - 2.0;
      const int y = static_cast<int>(rng.uniform_index(k));
      std::vector<double> g(k), h(k);
      softmax_grad_hess(s, y, g, h);
      const auto [fg, fh] = oracle::ce_finite_differences(s, y);
      for (std::size_t c = 0; c < k; ++c) {
        CHECK(std::abs(g[c] - fg[c]) <= 1e-6 * std::abs(fg[c]));
        CHECK(std::abs(h[c] - fh[c]) <= 1e-6 * std::abs(fh[c]));
      }
    }
  }

  TEST_CASE("gbdt training loss never increases") {
    const std::vector<LabeledDataset> sets{fixture::moons3(1, 300), fixture::blobs(2, {60, 150, 90}, 4, 1.0),
                                           fixture::noisy_blobs(3, 80, 3, 0.3)};
    for (double eta : {0.1, 0.3})
      for (const auto& ds : sets) {
        BoostParams bp;
        bp.n_rounds = 30;
        bp.learning_rate = eta;
        const auto m = fit_gbdt(ds, bp, 1);
        REQUIRE(m.train_loss.size() == 31);
        for (std::size_t r = 1; r < m.train_loss.size(); ++r) CHECK(m.train_loss[r] <= m.train_loss[r - 1]);
      }
  }

  TEST_CASE("gbdt limits") {
    const auto ds = fixture::blobs(4, {30, 60, 20}, 2, 2.0);
    BoostParams bp;
    bp.n_rounds = 0;
    check_rows_equal(predict_gbdt(fit_gbdt(ds, bp, 1), ds.features), priors(ds), 1e-12);
    bp.n_rounds = 5;
    bp.lambda = 1e12;
    check_rows_equal(predict_gbdt(fit_gbdt(ds, bp, 1), ds.features), priors(ds), 1e-9);
    bp.lambda = 1.0;
    CHECK(oracle::distributions_valid(predict_gbdt(fit_gbdt(ds, bp, 1), ds.features)));

    auto missing = ds;
    missing.class_names.push_back("absent");
    CHECK_THROWS_AS(fit_gbdt(missing, bp, 1), DataError);
  }

  TEST_CASE("one depth-1 boosting round separates balanced 1-D data") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
      x.push_back(i < 10 ? i : i + 5);
      y.push_back(i < 10 ? 0 : 1);
    }
    BoostParams bp;
    bp.n_rounds = 1;
    bp.max_depth = 1;
    const auto m = fit_gbdt(line(x, y), bp, 0);
    const auto test = line({-3, 4, 16, 40}, {0, 0, 1, 1});
    CHECK(oracle::accuracy(predict_gbdt(m, test.features), test.labels) == 1.0);
  }

  TEST_CASE("an extra round leaves rows in zero-weight leaves unchanged") {
    const auto ds = fixture::blobs(6, {40, 40}, 2, 3.0);
    BoostParams bp;
    bp.n_rounds = 3;
    const auto full = fit_gbdt(ds, bp, 2);
    auto shorter = full;
    shorter.rounds.pop_back();
    const auto a = gbdt_raw_scores(full, ds.features), b = gbdt_raw_scores(shorter, ds.features);
    for (std::size_t r = 0; r < ds.size(); ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        const double w = full.rounds.back()[c].leaf_value(ds.features.row(r))[0];
        if (w == 0.0) CHECK(a(r, c) == b(r, c));
      }
  }

  TEST_CASE("knn examples") {
    LabeledDataset ds;
    ds.features = Matrix(3, 2, {0, 0, 1, 0, 4, 0});
    ds.labels = {0, 0, 1};
    ds.feature_names = {"a", "b"};
    ds.class_names = {"c0", "c1"};
    const auto m3 = fit_knn(ds, 3);
    const auto P = predict_knn(m3, Matrix(1, 2, {0, 0}));
    CHECK(P(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(P(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));

    const auto m1 = fit_knn(ds, 1);
    const auto Q = predict_knn(m1, ds.features);
    for (std::size_t r = 0; r < 3; ++r) CHECK(Q(r, static_cast<std::size_t>(ds.labels[r])) == 1.0);

    const auto big = fixture::blobs(3, {10, 25, 5}, 2, 1.0);
    check_rows_equal(predict_knn(fit_knn(big, big.size()), big.features), priors(big), 1e-12);
    CHECK_THROWS_AS(fit_knn(ds, 4), DataError);
  }

  TEST_CASE("logistic gradient matches finite differences") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 5 + rng.uniform_index(20), d = 1 + rng.uniform_index(4), k = 2 + rng.uniform_index(3);
      const auto ds = oracle::random_dataset(rng, n, d, k, false);
      Matrix W(k, d + 1);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= d; ++j) W(i, j) = rng.normal();
      Matrix grad;
      logistic_objective(W, ds.features, ds.labels, &grad);
      const double h = 1e-5;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= d; ++j) {
          Matrix up = W, dn = W;
          up(i, j) += h;
          dn(i, j) -= h;
          const double fd = (logistic_objective(up, ds.features, ds.labels, nullptr) -
                             logistic_objective(dn, ds.features, ds.labels, nullptr)) /
                            (2 * h);
          const double scale = std::max({std::abs(fd), std::abs(grad(i, j)), 1e-3});
          CHECK(std::abs(fd - grad(i, j)) <= 1e-6 * scale);
        }
    }
  }

  TEST_CASE("logistic ignores a symmetric feature") {
    LabeledDataset ds;
    ds.features = Matrix(8, 2, {-1, -1, -1, 1, -2, 0.5, -2, -0.5, 1, -1, 1, 1, 2, 0.5, 2, -0.5});
    ds.labels = {0, 0, 0, 0, 1, 1, 1, 1};
    ds.feature_names = {"a", "b"};
    ds.class_names = {"c0", "c1"};
    const auto m = fit_logistic(ds);
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(std::abs(m.weights(c, 1)) <= 1e-6);
      CHECK(std::abs(m.weights(c, 2)) <= 1e-6);
    }
    CHECK(m.weights(1, 0) > m.weights(0, 0));
    CHECK(oracle::accuracy(predict_logistic(m, ds.features), ds.labels) == 1.0);
  }

  TEST_CASE("logistic with zero iterations predicts uniformly") {
    const auto ds = fixture::blobs(1, {10, 30, 20}, 3, 2.0);
    LogisticParams lp;
    lp.max_iter = 0;
    const auto m = fit_logistic(ds, lp);
    for (double w : m.weights.values()) CHECK(w == 0.0);
    check_rows_equal(predict_logistic(m, ds.features), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-15);
    CHECK(oracle::distributions_valid(predict_logistic(fit_logistic(ds), ds.features)));
  }

  TEST_CASE("models survive a JSON round trip bit for bit") {
    const auto ds = fixture::moons3(13, 240);
    std::vector<BaseSpec> specs{{"t", "tree", {}},
                                {"f", "forest", {{"n_trees", "7"}}},
                                {"g", "gbdt", {{"n_rounds", "6"}, {"alpha", "0.5"}}},
                                {"k", "knn", {{"k", "4"}}},
                                {"l", "logistic", {{"max_iter", "40"}}},
                                {"p", "prior", {}}};
    for (const auto& spec : specs) {
      const auto model = make_learner(spec)->fit(ds, 3);
      const auto back = classifier_from_json(model->to_json());
      CHECK(back->kind() == model->kind());
      CHECK(back->predict_proba(ds.features) == model->predict_proba(ds.features));
      CHECK(back->to_json() == model->to_json());
      CHECK(oracle::distributions_valid(model->predict_proba(ds.features)));
    }
    CHECK_THROWS_AS(make_learner({"x", "svm", {}}), UsageError);
    CHECK_THROWS_AS(make_learner({"x", "knn", {{"kk", "3"}}}), UsageError);
  }
}
