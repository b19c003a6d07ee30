#ifndef CDOXAI_SHAP_H_
#define CDOXAI_SHAP_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdoxai/dataset.h"
#include "cdoxai/forest.h"

namespace cdoxai {

// Exact path-dependent Tree SHAP. Absent features are marginalized by
// descending both children weighted by their training cover. Returns
// attributions laid out as [feature * n_outputs + output] for every leaf
// output. Features never split on receive exactly 0. Throws kMissingCover
// when a node's cover is non-positive or inconsistent with its children.
std::vector<double> TreeShap(const Tree& tree, std::span<const double> row,
                             std::size_t n_features, int n_outputs);

// Single-output convenience: per-feature attribution for leaf output `output`.
std::vector<double> TreeShap(const Tree& tree, std::span<const double> row,
                             std::size_t n_features, int n_outputs, int output);

// Cover-weighted mean of the leaf values (the attribution baseline).
std::vector<double> TreeExpectedValue(const Tree& tree, int n_outputs);

enum class AttributionSpace { kProbability, kLogOdds };

std::string_view AttributionSpaceName(AttributionSpace space);

// Attributions for a batch of rows explained by one model. For every row r
// and class k: sum_f value(r, f, k) + base_values[k] equals the model output
// in `space` (forest probability, boosting class score).
struct ShapMatrix {
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  int n_classes = 0;
  std::vector<double> values;  // [(sample * n_features + feature) * n_classes + class]
  std::vector<double> base_values;
  std::vector<std::string> feature_names;
  AttributionSpace space = AttributionSpace::kProbability;
  Matrix inputs;                        // explained rows
  std::vector<std::size_t> sample_ids;  // dataset row index per sample
  std::vector<int> labels;              // scenario labels, when known

  double at(std::size_t sample, std::size_t feature, int k) const {
    return values[(sample * n_features + feature) * n_classes + k];
  }
  // Attribution toward `positive` in a two-class model: the positive class's
  // probability attribution, or the log-odds attribution phi[pos] - phi[neg]
  // for boosting scores.
  double Binary(std::size_t sample, std::size_t feature, int positive) const;
  double BinaryBase(int positive) const;
  std::size_t FeatureIndex(std::string_view name) const;
};

// Throws kSchemaMismatch when x has the wrong width.
ShapMatrix EnsembleShap(const TreeEnsemble& model, const Matrix& x,
                        std::span<const std::size_t> sample_ids = {});

// Normalized to sum 1; ranking sorts descending with lower index first on ties.
struct GlobalImportance {
  std::vector<std::string> feature_names;
  std::vector<double> scores;
  std::vector<std::size_t> ranking;

  std::vector<std::string> Top(std::size_t n) const;
};

// Multi-class (positive_class < 0): mean |phi| over classes, then test
// samples, then folds. Binary: mean |binary attribution| over test samples,
// then folds. Throws kEmptyFolds.
GlobalImportance ComputeGlobalImportance(std::span<const ShapMatrix> folds,
                                         int positive_class);

// (feature value, attribution toward positive_class) pooled over folds in
// fold order. Throws kUnknownFeature.
std::vector<std::pair<double, double>> ClassSpecificShap(
    std::span<const ShapMatrix> folds, std::string_view feature,
    int positive_class);

// Exact 1-D Wasserstein-1 distance between two empirical samples (integral
// of the absolute CDF difference). Throws kEmptySample.
double Wasserstein1d(std::span<const double> a, std::span<const double> b);

struct WdReport {
  std::vector<std::string> feature_names;
  std::vector<double> wd;  // per feature
  double mean_wd = 0.0;
  double top5_mean_wd = 0.0;
  int count_above = 0;  // features with wd > threshold
  double threshold = 0.5;
};

// Per feature, WD between the binary attributions of samples labeled 0 and
// samples labeled 1, pooled over folds. Throws kSingleClassData.
WdReport ComputeWdReport(std::span<const ShapMatrix> folds, int positive_class,
                         double threshold = 0.5, std::size_t top_n = 5);

}  // namespace cdoxai

#endif  // CDOXAI_SHAP_H_
