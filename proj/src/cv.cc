#include "cdoxai/cv.h"

#include <algorithm>
#include <map>

#include "cdoxai/error.h"
#include "cdoxai/rng.h"

namespace cdoxai {

std::string_view ScenarioIdName(ScenarioId id) {
  switch (id) {
    case ScenarioId::kThreeClass: return "three_class";
    case ScenarioId::kLowVsNotLow: return "low_vs_notlow";
    case ScenarioId::kHighVsNotHigh: return "high_vs_nothigh";
  }
  return "three_class";
}

ScenarioId ParseScenarioId(std::string_view name) {
  if (name == "three_class" || name == "1") return ScenarioId::kThreeClass;
  if (name == "low_vs_notlow" || name == "2") return ScenarioId::kLowVsNotLow;
  if (name == "high_vs_nothigh" || name == "3") return ScenarioId::kHighVsNotHigh;
  throw Error(ErrorCode::kConfig, "unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec ScenarioSpec::Make(ScenarioId id, int positive_class) {
  ScenarioSpec spec;
  spec.id = id;
  switch (id) {
    case ScenarioId::kThreeClass:
      spec.class_names = {"Low", "Medium", "High"};
      spec.relabel = {0, 1, 2};
      spec.positive_class = -1;
      return spec;
    case ScenarioId::kLowVsNotLow:
      spec.class_names = {"Low", "NotLow"};
      spec.relabel = {0, 1, 1};
      spec.positive_class = 1;
      break;
    case ScenarioId::kHighVsNotHigh:
      spec.class_names = {"NotHigh", "High"};
      spec.relabel = {0, 0, 1};
      spec.positive_class = 1;
      break;
  }
  if (positive_class >= 0) {
    if (positive_class > 1) {
      throw Error(ErrorCode::kConfig, "binary positive class must be 0 or 1");
    }
    spec.positive_class = positive_class;
  }
  return spec;
}

std::vector<int> Relabel(std::span<const int> labels, const ScenarioSpec& spec) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int y : labels) {
    if (y < 0 || y > 2) {
      throw Error(ErrorCode::kUnknownLabel,
                  "label " + std::to_string(y) + " is not Low/Medium/High");
    }
    out.push_back(spec.relabel[y]);
  }
  return out;
}

std::vector<std::size_t> Folds::Train(std::size_t i, std::size_t n) const {
  std::vector<bool> held(n, false);
  for (std::size_t idx : test[i]) held[idx] = true;
  std::vector<std::size_t> train;
  train.reserve(n - test[i].size());
  for (std::size_t j = 0; j < n; ++j) {
    if (!held[j]) train.push_back(j);
  }
  return train;
}

Folds StratifiedKFold(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kConfig, "k must be at least 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  Folds folds;
  folds.test.resize(static_cast<std::size_t>(k));
  std::size_t dealt = 0;
  for (auto& [label, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::kClassTooSmall,
                  "class " + std::to_string(label) + " has " +
                      std::to_string(members.size()) + " members, need " +
                      std::to_string(k));
    }
    rng.Shuffle(members);
    for (std::size_t idx : members) {
      folds.test[dealt % k].push_back(idx);
      ++dealt;
    }
  }
  for (auto& fold : folds.test) std::sort(fold.begin(), fold.end());
  return folds;
}

Metrics Evaluate(std::span<const int> predicted, std::span<const int> truth,
                 int n_classes, int positive_class) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction and truth lengths differ");
  }
  if (truth.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to evaluate");

  std::vector<double> tp(n_classes, 0.0);
  std::vector<double> pred_count(n_classes, 0.0);
  std::vector<double> true_count(n_classes, 0.0);
  double correct = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int p = predicted[i];
    const int t = truth[i];
    if (p < 0 || p >= n_classes || t < 0 || t >= n_classes) {
      throw Error(ErrorCode::kUnknownLabel, "label outside class range");
    }
    pred_count[p] += 1.0;
    true_count[t] += 1.0;
    if (p == t) {
      tp[t] += 1.0;
      correct += 1.0;
    }
  }
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  auto harmonic = [](double a, double b) {
    return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
  };

  Metrics m;
  m.accuracy = correct / static_cast<double>(truth.size());
  if (positive_class >= 0) {
    m.precision = ratio(tp[positive_class], pred_count[positive_class]);
    m.recall = ratio(tp[positive_class], true_count[positive_class]);
    m.f1 = harmonic(m.precision, m.recall);
    return m;
  }
  double present = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    if (pred_count[c] == 0.0 && true_count[c] == 0.0) continue;
    const double p = ratio(tp[c], pred_count[c]);
    const double r = ratio(tp[c], true_count[c]);
    m.precision += p;
    m.recall += r;
    m.f1 += harmonic(p, r);
    present += 1.0;
  }
  m.precision /= present;
  m.recall /= present;
  m.f1 /= present;
  return m;
}

Metrics MeanMetrics(std::span<const Metrics> folds) {
  Metrics mean;
  if (folds.empty()) return mean;
  for (const Metrics& m : folds) {
    mean.accuracy += m.accuracy;
    mean.precision += m.precision;
    mean.recall += m.recall;
    mean.f1 += m.f1;
  }
  const double n = static_cast<double>(folds.size());
  mean.accuracy /= n;
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  return mean;
}

TreeEnsemble TrainModel(const ModelSpec& spec, const Matrix& x,
                        std::span<const int> labels, int n_classes,
                        std::vector<std::string> feature_names,
                        std::uint64_t seed) {
  if (spec.kind == EnsembleKind::kRandomForest) {
    ForestParams params = spec.forest;
    params.seed = seed;
    return TrainRandomForest(x, labels, n_classes, params, std::move(feature_names));
  }
  BoostingParams params = spec.boosting;
  params.seed = seed;
  return TrainGradientBoosting(x, labels, n_classes, params,
                               std::move(feature_names));
}

CvRun CrossValidate(const ModelSpec& spec, const Matrix& x,
                    std::span<const int> labels, int n_classes,
                    int positive_class, int k, std::uint64_t seed,
                    const std::vector<std::string>& feature_names) {
  if (labels.size() != x.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "labels do not match matrix rows");
  }
  CvRun run;
  run.folds = StratifiedKFold(labels, k, seed);
  for (std::size_t f = 0; f < run.folds.k(); ++f) {
    const auto train = run.folds.Train(f, x.rows());
    const auto& test = run.folds.test[f];
    const Matrix x_train = x.Select(train);
    std::vector<int> y_train;
    for (std::size_t i : train) y_train.push_back(labels[i]);
    TreeEnsemble model = TrainModel(spec, x_train, y_train, n_classes,
                                    feature_names, DeriveSeed(seed, f));
    const Matrix x_test = x.Select(test);
    std::vector<int> y_test;
    for (std::size_t i : test) y_test.push_back(labels[i]);
    std::vector<int> predicted = Predict(model, x_test);
    run.report.folds.push_back(
        Evaluate(predicted, y_test, n_classes, positive_class));
    run.predicted.push_back(std::move(predicted));
    run.models.push_back(std::move(model));
  }
  run.report.mean = MeanMetrics(run.report.folds);
  return run;
}

}  // namespace cdoxai
