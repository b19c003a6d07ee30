#ifndef CDOXAI_CV_H_
#define CDOXAI_CV_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/dataset.h"
#include "cdoxai/forest.h"

namespace cdoxai {

enum class ScenarioId { kThreeClass, kLowVsNotLow, kHighVsNotHigh };

std::string_view ScenarioIdName(ScenarioId id);
ScenarioId ParseScenarioId(std::string_view name);

// How the three adherence categories collapse into the classes of one
// classification scenario.
struct ScenarioSpec {
  ScenarioId id = ScenarioId::kThreeClass;
  std::vector<std::string> class_names;
  std::array<int, 3> relabel{0, 1, 2};  // indexed by CdoCategory
  int positive_class = -1;              // -1: macro-averaged multi-class

  int n_classes() const { return static_cast<int>(class_names.size()); }
  bool binary() const { return n_classes() == 2; }

  // Binary scenarios default to NotLow and High as positive classes;
  // `positive_class` overrides that choice.
  static ScenarioSpec Make(ScenarioId id, int positive_class = -2);
};

std::vector<int> Relabel(std::span<const int> labels, const ScenarioSpec& spec);

// Test-fold index sets; each list is sorted ascending.
struct Folds {
  std::vector<std::vector<std::size_t>> test;

  std::size_t k() const { return test.size(); }
  // Complement of fold `i` within [0, n), ascending.
  std::vector<std::size_t> Train(std::size_t i, std::size_t n) const;
};

// Shuffles each class with the seeded generator, then deals the concatenated
// class lists round-robin, so fold sizes differ by at most one and each class
// is split as evenly as possible. Throws kClassTooSmall when a present class
// has fewer than k members.
Folds StratifiedKFold(std::span<const int> labels, int k, std::uint64_t seed);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Binary scenarios score the positive class. Multi-class (positive_class < 0)
// macro-averages per-class precision, recall and F1; undefined ratios count
// as 0.
Metrics Evaluate(std::span<const int> predicted, std::span<const int> truth,
                 int n_classes, int positive_class);

struct CvReport {
  std::vector<Metrics> folds;
  Metrics mean;
};

Metrics MeanMetrics(std::span<const Metrics> folds);

struct ModelSpec {
  EnsembleKind kind = EnsembleKind::kRandomForest;
  ForestParams forest;
  BoostingParams boosting;
};

TreeEnsemble TrainModel(const ModelSpec& spec, const Matrix& x,
                        std::span<const int> labels, int n_classes,
                        std::vector<std::string> feature_names,
                        std::uint64_t seed);

struct CvRun {
  Folds folds;
  std::vector<TreeEnsemble> models;      // one per fold
  std::vector<std::vector<int>> predicted;  // per fold, aligned with test
  CvReport report;
};

// Stratified k-fold evaluation. Fold i trains with seed DeriveSeed(seed, i).
CvRun CrossValidate(const ModelSpec& spec, const Matrix& x,
                    std::span<const int> labels, int n_classes,
                    int positive_class, int k, std::uint64_t seed,
                    const std::vector<std::string>& feature_names = {});

}  // namespace cdoxai

#endif  // CDOXAI_CV_H_
