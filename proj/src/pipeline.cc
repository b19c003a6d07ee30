#include "cdoxai/pipeline.h"

#include "cdoxai/error.h"

namespace cdoxai {

ScenarioRun RunScenario(const PipelineConfig& config, const Dataset& dataset,
                        ScenarioId id, EnsembleKind kind) {
  ScenarioRun run;
  run.scenario = config.scenario(id);
  run.kind = kind;
  run.labels = Relabel(dataset.labels, run.scenario);
  run.cv = CrossValidate(config.model(kind), dataset.features, run.labels,
                         run.scenario.n_classes(), run.scenario.positive_class,
                         config.k_folds, config.seed, dataset.feature_names);
  return run;
}

std::vector<ShapMatrix> ExplainFolds(std::span<const TreeEnsemble> models,
                                     const Folds& folds, const Matrix& x,
                                     std::span<const int> labels) {
  if (models.size() != folds.k()) {
    throw Error(ErrorCode::kLengthMismatch, "one model per fold is required");
  }
  if (labels.size() != x.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "labels do not match matrix rows");
  }
  std::vector<ShapMatrix> out;
  for (std::size_t f = 0; f < folds.k(); ++f) {
    const auto& test = folds.test[f];
    ShapMatrix shap = EnsembleShap(models[f], x.Select(test), test);
    for (std::size_t i : test) shap.labels.push_back(labels[i]);
    out.push_back(std::move(shap));
  }
  return out;
}

Explanation Summarize(const ScenarioSpec& scenario, EnsembleKind kind,
                      std::span<const ShapMatrix> folds) {
  if (folds.empty()) throw Error(ErrorCode::kEmptyFolds, "no folds to summarize");
  Explanation e;
  e.scenario = scenario.id;
  e.kind = kind;
  e.space = folds.front().space;
  e.positive_class = scenario.binary() ? scenario.positive_class : -1;
  e.importance = ComputeGlobalImportance(folds, e.positive_class);
  if (scenario.binary()) e.wd = ComputeWdReport(folds, e.positive_class);
  return e;
}

std::vector<std::size_t> RuleColumns(const Dataset& dataset) {
  std::vector<std::size_t> columns;
  for (std::string_view name : kFexaiFeatures) {
    columns.push_back(dataset.FeatureIndex(std::string(name)));
  }
  return columns;
}

TopFeatureComparison CompareOnRuleInputs(const PipelineConfig& config,
                                         const Dataset& dataset) {
  const ScenarioSpec scenario = config.scenario(ScenarioId::kLowVsNotLow);
  const std::vector<int> labels = Relabel(dataset.labels, scenario);
  const Matrix x = dataset.features.SelectColumns(RuleColumns(dataset));
  const std::vector<std::string> names(kFexaiFeatures.begin(), kFexaiFeatures.end());

  TopFeatureComparison out;
  out.fexai = EvaluateFexai(config.partition(), RuleInputs(dataset), labels,
                            config.k_folds, config.seed);
  out.forest = CrossValidate(config.model(EnsembleKind::kRandomForest), x, labels, 2,
                             scenario.positive_class, config.k_folds, config.seed, names);
  out.boosting = CrossValidate(config.model(EnsembleKind::kGradientBoosting), x, labels,
                               2, scenario.positive_class, config.k_folds,
                               config.seed, names);
  return out;
}

}  // namespace cdoxai
