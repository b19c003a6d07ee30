#ifndef CDOXAI_PIPELINE_H_
#define CDOXAI_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdoxai/config.h"
#include "cdoxai/cv.h"
#include "cdoxai/dataset.h"
#include "cdoxai/fexai.h"
#include "cdoxai/shap.h"

namespace cdoxai {

// One scenario and model kind under stratified cross-validation.
struct ScenarioRun {
  ScenarioSpec scenario;
  EnsembleKind kind = EnsembleKind::kRandomForest;
  std::vector<int> labels;  // scenario labels, one per dataset row
  CvRun cv;
};

ScenarioRun RunScenario(const PipelineConfig& config, const Dataset& dataset,
                        ScenarioId id, EnsembleKind kind);

// Each fold model explains its own test rows; labels are copied in so the
// folds can feed the separability report directly.
std::vector<ShapMatrix> ExplainFolds(std::span<const TreeEnsemble> models,
                                     const Folds& folds, const Matrix& x,
                                     std::span<const int> labels);

struct Explanation {
  ScenarioId scenario = ScenarioId::kThreeClass;
  EnsembleKind kind = EnsembleKind::kRandomForest;
  AttributionSpace space = AttributionSpace::kProbability;
  int positive_class = -1;
  GlobalImportance importance;
  std::optional<WdReport> wd;  // binary scenarios only
};

Explanation Summarize(const ScenarioSpec& scenario, EnsembleKind kind,
                      std::span<const ShapMatrix> folds);

// Columns of the three rule inputs, in antecedent order.
std::vector<std::size_t> RuleColumns(const Dataset& dataset);

// Low-vs-NotLow evaluation on the rule inputs only: the fuzzy classifier
// and both ensembles, sharing the same folds.
struct TopFeatureComparison {
  FexaiRun fexai;
  CvRun forest;
  CvRun boosting;
};

TopFeatureComparison CompareOnRuleInputs(const PipelineConfig& config,
                                         const Dataset& dataset);

}  // namespace cdoxai

#endif  // CDOXAI_PIPELINE_H_
