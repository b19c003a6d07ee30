#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "cdoxai/cv.h"
#include "cdoxai/forest.h"
#include "cdoxai/shap.h"
#include "oracles.h"
#include "test_util.h"

namespace cdoxai {
namespace {

Tree Stump(int feature, double threshold, double left_cover, double right_cover,
           std::vector<double> left, std::vector<double> right) {
  Tree t;
  t.nodes = {{feature, threshold, 1, 2, left_cover + right_cover, {}},
             {-1, 0, -1, -1, left_cover, std::move(left)},
             {-1, 0, -1, -1, right_cover, std::move(right)}};
  return t;
}

TEST(TreeShap, SingleLeafGivesZero) {
  Tree t;
  t.nodes = {{-1, 0, -1, -1, 5, {0.7}}};
  const std::vector<double> row{1, 2, 3};
  EXPECT_EQ(TreeShap(t, row, 3, 1), (std::vector<double>{0, 0, 0}));
}

TEST(TreeShap, StumpAttributesOnlyItsFeature) {
  const Tree t = Stump(1, 0.5, 3, 1, {2.0}, {6.0});
  const std::vector<double> row{9, 0.2, 9};
  const auto phi = TreeShap(t, row, 3, 1);
  const double expected = (3 * 2.0 + 1 * 6.0) / 4;
  EXPECT_EQ(phi[0], 0.0);
  EXPECT_EQ(phi[2], 0.0);
  EXPECT_NEAR(phi[1], 2.0 - expected, 1e-15);
  EXPECT_NEAR(TreeExpectedValue(t, 1)[0], expected, 1e-15);
}

TEST(TreeShap, DepthTwoMatchesBruteForce) {
  // Root on x0, left child on x1, right child on x2.
  Tree t;
  t.nodes = {{0, 0.5, 1, 2, 10, {}},
             {1, 0.3, 3, 4, 6, {}},
             {2, 0.7, 5, 6, 4, {}},
             {-1, 0, -1, -1, 2, {1.0, -1.0}},
             {-1, 0, -1, -1, 4, {3.0, 0.5}},
             {-1, 0, -1, -1, 1, {-2.0, 2.0}},
             {-1, 0, -1, -1, 3, {5.0, 1.0}}};
  for (const std::vector<double>& row :
       {std::vector<double>{0.1, 0.1, 0.9}, {0.9, 0.9, 0.1}, {0.4, 0.6, 0.8}}) {
    const auto phi = TreeShap(t, row, 3, 2);
    for (int k = 0; k < 2; ++k) {
      const auto oracle = oracle::BruteForceShapley(t, row, 3, k);
      for (int f = 0; f < 3; ++f) EXPECT_NEAR(phi[f * 2 + k], oracle[f], 1e-12);
    }
  }
}

TEST(TreeShap, RepeatedFeatureOnPath) {
  Tree t;
  t.nodes = {{0, 0.5, 1, 2, 8, {}},
             {0, 0.2, 3, 4, 5, {}},
             {-1, 0, -1, -1, 3, {4.0}},
             {-1, 0, -1, -1, 1, {-1.0}},
             {1, 0.5, 5, 6, 4, {}},
             {-1, 0, -1, -1, 2, {2.0}},
             {-1, 0, -1, -1, 2, {0.0}}};
  const std::vector<double> row{0.3, 0.9};
  const auto phi = TreeShap(t, row, 2, 1);
  for (int f = 0; f < 2; ++f) {
    EXPECT_NEAR(phi[f], oracle::BruteForceShapley(t, row, 2, 0)[f], 1e-12);
  }
}

TEST(TreeShap, RandomTreesMatchBruteForce) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + trial % 5;
    const Tree t = oracle::RandomTree(gen, m, 3, 2);
    for (int r = 0; r < 10; ++r) {
      std::vector<double> row(m);
      for (double& v : row) v = unit(gen);
      const auto phi = TreeShap(t, row, m, 2);
      for (int k = 0; k < 2; ++k) {
        const auto expected = oracle::BruteForceShapley(t, row, m, k);
        for (int f = 0; f < m; ++f) EXPECT_NEAR(phi[f * 2 + k], expected[f], 1e-9);
      }
    }
  }
}

TEST(TreeShap, SymmetricDuplicateFeatures) {
  // x0 and x1 play identical roles: same thresholds, mirrored structure.
  Tree t;
  t.nodes = {{0, 0.5, 1, 2, 8, {}},
             {1, 0.5, 3, 4, 4, {}},
             {1, 0.5, 5, 6, 4, {}},
             {-1, 0, -1, -1, 2, {0.0}},
             {-1, 0, -1, -1, 2, {1.0}},
             {-1, 0, -1, -1, 2, {1.0}},
             {-1, 0, -1, -1, 2, {3.0}}};
  const std::vector<double> row{0.9, 0.9};
  const auto phi = TreeShap(t, row, 2, 1);
  EXPECT_NEAR(phi[0], phi[1], 1e-15);
}

TEST(TreeShap, MissingCover) {
  Tree t = Stump(0, 0.5, 3, 1, {1.0}, {2.0});
  t.nodes[2].cover = 0;
  t.nodes[0].cover = 3;
  const std::vector<double> row{0.1};
  EXPECT_EQ(CodeOf([&] { TreeShap(t, row, 1, 1); }), ErrorCode::kMissingCover);
  Tree u = Stump(0, 0.5, 3, 1, {1.0}, {2.0});
  u.nodes[0].cover = 7;  // children add to 4
  EXPECT_EQ(CodeOf([&] { TreeShap(u, row, 1, 1); }), ErrorCode::kMissingCover);
}

Matrix RandomMatrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = unit(gen);
  }
  return x;
}

std::vector<int> LabelsFor(const Matrix& x) {
  std::vector<int> y;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double s = x(i, 0) + 0.5 * x(i, 1);
    y.push_back(s < 0.5 ? 0 : (s < 1.0 ? 1 : 2));
  }
  return y;
}

TEST(EnsembleShap, LocalAccuracyBothKinds) {
  const Matrix x = RandomMatrix(120, 4, 8);
  const auto y = LabelsFor(x);
  for (EnsembleKind kind : {EnsembleKind::kRandomForest, EnsembleKind::kGradientBoosting}) {
    ModelSpec spec;
    spec.kind = kind;
    spec.forest.n_trees = 15;
    spec.boosting.n_rounds = 15;
    const auto model = TrainModel(spec, x, y, 3, {"a", "b", "c", "d"}, 3);
    const ShapMatrix shap = EnsembleShap(model, x);
    EXPECT_EQ(shap.space, kind == EnsembleKind::kRandomForest
                              ? AttributionSpace::kProbability
                              : AttributionSpace::kLogOdds);
    for (std::size_t s = 0; s < x.rows(); ++s) {
      const auto raw = PredictRaw(model, x.row(s));
      for (int k = 0; k < 3; ++k) {
        double total = shap.base_values[k];
        for (std::size_t f = 0; f < 4; ++f) total += shap.at(s, f, k);
        EXPECT_NEAR(total, raw[k], 1e-9);
      }
    }
  }
}

TEST(EnsembleShap, OneTreeEqualsTreeShapAndTwoIdenticalTreesDouble) {
  const Tree t = Stump(0, 0.5, 2, 2, {0.1, -0.1}, {-0.3, 0.3});
  TreeEnsemble m;
  m.kind = EnsembleKind::kGradientBoosting;
  m.n_classes = 2;
  m.n_features = 2;
  m.base_value = {0.0, 0.0};
  m.trees = {t};
  const Matrix x = RandomMatrix(5, 2, 1);
  const ShapMatrix one = EnsembleShap(m, x);
  m.trees.push_back(t);
  const ShapMatrix two = EnsembleShap(m, x);
  for (std::size_t s = 0; s < 5; ++s) {
    const auto phi = TreeShap(t, x.row(s), 2, 2);
    for (std::size_t f = 0; f < 2; ++f) {
      for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(one.at(s, f, k), phi[f * 2 + k]);
        EXPECT_EQ(two.at(s, f, k), 2 * phi[f * 2 + k]);
      }
    }
  }
  const Matrix wide = RandomMatrix(2, 3, 1);
  EXPECT_EQ(CodeOf([&] { EnsembleShap(m, wide); }), ErrorCode::kSchemaMismatch);
}

ShapMatrix Synthetic(std::size_t n, std::size_t features, int classes,
                     std::function<double(std::size_t, std::size_t, int)> value) {
  ShapMatrix s;
  s.n_samples = n;
  s.n_features = features;
  s.n_classes = classes;
  s.base_values.assign(classes, 0.0);
  s.inputs = Matrix(n, features);
  for (std::size_t f = 0; f < features; ++f) s.feature_names.push_back("f" + std::to_string(f));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < features; ++f) {
      s.inputs(i, f) = static_cast<double>(i);
      for (int k = 0; k < classes; ++k) s.values.push_back(value(i, f, k));
    }
    s.labels.push_back(static_cast<int>(i % 2));
  }
  return s;
}

TEST(GlobalImportance, HandAggregation) {
  const auto fold = Synthetic(4, 3, 2, [](std::size_t i, std::size_t f, int) {
    if (f == 2) return 0.0;
    const double mag = f == 0 ? 1.0 : 3.0;
    return i % 2 ? mag : -mag;
  });
  const std::vector<ShapMatrix> folds{fold, fold};
  const auto gi = ComputeGlobalImportance(folds, -1);
  EXPECT_NEAR(gi.scores[0], 0.25, 1e-15);
  EXPECT_NEAR(gi.scores[1], 0.75, 1e-15);
  EXPECT_EQ(gi.scores[2], 0.0);
  EXPECT_EQ(gi.ranking, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_EQ(gi.Top(2), (std::vector<std::string>{"f1", "f0"}));
  EXPECT_EQ(CodeOf([] { ComputeGlobalImportance({}, -1); }), ErrorCode::kEmptyFolds);
}

TEST(GlobalImportance, BinaryLogOddsView) {
  auto fold = Synthetic(2, 2, 2, [](std::size_t, std::size_t f, int k) {
    return f == 0 ? (k == 1 ? 1.0 : -1.0) : 0.5;
  });
  fold.space = AttributionSpace::kLogOdds;
  EXPECT_EQ(fold.Binary(0, 0, 1), 2.0);
  EXPECT_EQ(fold.Binary(0, 1, 1), 0.0);
  const std::vector<ShapMatrix> folds{fold};
  const auto gi = ComputeGlobalImportance(folds, 1);
  EXPECT_EQ(gi.scores, (std::vector<double>{1.0, 0.0}));
}

TEST(ClassSpecificShap, PairsAndUnknownFeature) {
  const auto fold = Synthetic(3, 2, 2, [](std::size_t i, std::size_t f, int k) {
    return k == 1 ? static_cast<double>(i) - 1.0 + f : 0.0;
  });
  const std::vector<ShapMatrix> folds{fold, fold};
  const auto pairs = ClassSpecificShap(folds, "f1", 1);
  ASSERT_EQ(pairs.size(), 6u);
  EXPECT_EQ(pairs[0], (std::pair<double, double>{0.0, 0.0}));
  EXPECT_EQ(pairs[2], (std::pair<double, double>{2.0, 2.0}));
  EXPECT_EQ(CodeOf([&] { ClassSpecificShap(folds, "nope", 1); }),
            ErrorCode::kUnknownFeature);
}

TEST(ClassSpecificShap, SignFlipsAtLabelThreshold) {
  // Label = x0 > 0.6; a forest should push toward class 1 only above it.
  const Matrix x = RandomMatrix(300, 2, 12);
  std::vector<int> y;
  for (std::size_t i = 0; i < x.rows(); ++i) y.push_back(x(i, 0) > 0.6);
  ForestParams fp;
  fp.n_trees = 30;
  fp.max_features = 0;
  fp.seed = 2;
  const auto model = TrainRandomForest(x, y, 2, fp, {"MDRate", "noise"});
  const std::vector<ShapMatrix> folds{EnsembleShap(model, x)};
  for (const auto& [value, phi] : ClassSpecificShap(folds, "MDRate", 1)) {
    if (value > 0.65) {
      EXPECT_GT(phi, 0.0) << value;
    } else if (value < 0.55) {
      EXPECT_LT(phi, 0.0) << value;
    }
  }
}

TEST(Wasserstein, HandCases) {
  const std::vector<double> a{0.3, -1.2, 4.0};
  EXPECT_EQ(Wasserstein1d(a, a), 0.0);
  EXPECT_EQ(Wasserstein1d(std::vector<double>{0.0}, std::vector<double>{2.5}), 2.5);
  EXPECT_EQ(Wasserstein1d(std::vector<double>{0.0}, std::vector<double>{-2.5}), 2.5);
  EXPECT_DOUBLE_EQ(Wasserstein1d(std::vector<double>{0, 1}, std::vector<double>{1, 2}), 1.0);
  EXPECT_EQ(CodeOf([&] { Wasserstein1d({}, a); }), ErrorCode::kEmptySample);
}

TEST(Wasserstein, MatchesQuantileOracleAndAxioms) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 60);
  auto draw = [&](double shift) {
    std::vector<double> v(size(gen));
    for (double& x : v) x = std::round(4 * (normal(gen) + shift)) / 4;  // ties on purpose
    return v;
  };
  for (int t = 0; t < 200; ++t) {
    const auto a = draw(0.0);
    const auto b = draw(0.5);
    const auto c = draw(-0.3);
    const double ab = Wasserstein1d(a, b);
    EXPECT_NEAR(ab, oracle::QuantileWasserstein(a, b), 1e-9);
    EXPECT_GE(ab, 0.0);
    EXPECT_NEAR(ab, Wasserstein1d(b, a), 1e-12);
    EXPECT_LE(ab, Wasserstein1d(a, c) + Wasserstein1d(c, b) + 1e-12);
  }
}

TEST(WdReport, TwoPointDistributions) {
  const auto fold = Synthetic(6, 3, 2, [](std::size_t i, std::size_t f, int) {
    if (f == 0) return i % 2 ? 1.0 : -1.0;
    if (f == 1) return 0.25 * static_cast<double>(i / 2);  // same for both labels
    return 0.3;
  });
  const std::vector<ShapMatrix> folds{fold};
  const WdReport r = ComputeWdReport(folds, 1);
  EXPECT_DOUBLE_EQ(r.wd[0], 2.0);
  EXPECT_DOUBLE_EQ(r.wd[1], 0.0);
  EXPECT_DOUBLE_EQ(r.wd[2], 0.0);
  EXPECT_DOUBLE_EQ(r.mean_wd, 2.0 / 3);
  EXPECT_DOUBLE_EQ(r.top5_mean_wd, 2.0 / 3);
  EXPECT_EQ(r.count_above, 1);

  auto single = fold;
  single.labels.assign(6, 1);
  const std::vector<ShapMatrix> one_class{single};
  EXPECT_EQ(CodeOf([&] { ComputeWdReport(one_class, 1); }), ErrorCode::kSingleClassData);
}

}  // namespace
}  // namespace cdoxai
