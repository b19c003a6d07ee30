#ifndef CDOXAI_FOREST_H_
#define CDOXAI_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/dataset.h"

namespace cdoxai {

// Flat binary tree node. Internal nodes route `x[feature] <= threshold` to
// `left`. Every node records its training cover (sample count, counting
// bootstrap duplicates); leaves hold one score per class.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double cover = 0.0;
  std::vector<double> value;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// nodes[0] is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  std::size_t LeafIndex(std::span<const double> row) const;
  const std::vector<double>& Evaluate(std::span<const double> row) const {
    return nodes[LeafIndex(row)].value;
  }
  int Depth() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

enum class EnsembleKind { kRandomForest, kGradientBoosting };

std::string_view EnsembleKindName(EnsembleKind kind);
EnsembleKind ParseEnsembleKind(std::string_view name);

// Random forests average leaf class frequencies (probability space).
// Gradient boosting sums leaf scores onto base_value (log class priors) and
// applies a softmax; learning rate is already folded into the leaves.
struct TreeEnsemble {
  EnsembleKind kind = EnsembleKind::kRandomForest;
  int n_classes = 0;
  std::size_t n_features = 0;
  std::vector<std::string> feature_names;
  std::uint64_t seed = 0;
  std::vector<double> base_value;
  std::vector<Tree> trees;

  friend bool operator==(const TreeEnsemble&, const TreeEnsemble&) = default;
};

struct TreeParams {
  int max_depth = 12;
  int min_leaf = 1;
  // Features drawn per node; 0 or >= n_features means all of them.
  int max_features = 0;
  std::uint64_t seed = 0;
};

// CART classification tree with Gini impurity. `sample` lists training row
// indices and may repeat rows (bootstrap); empty means every row once.
Tree TrainTree(const Matrix& x, std::span<const int> labels, int n_classes,
               const TreeParams& params,
               std::span<const std::size_t> sample = {});

struct ForestParams {
  int n_trees = 200;
  int max_depth = 12;
  int min_leaf = 1;
  // -1 selects floor(sqrt(n_features)); 0 selects all features.
  int max_features = -1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

TreeEnsemble TrainRandomForest(const Matrix& x, std::span<const int> labels,
                               int n_classes, const ForestParams& params,
                               std::vector<std::string> feature_names = {});

struct BoostingParams {
  int n_rounds = 200;
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

inline constexpr double kScoreClamp = 30.0;

TreeEnsemble TrainGradientBoosting(const Matrix& x, std::span<const int> labels,
                                   int n_classes, const BoostingParams& params,
                                   std::vector<std::string> feature_names = {});

// Output in the space SHAP explains: probabilities for forests, raw class
// scores for boosting. Throws kFeatureCountMismatch.
std::vector<double> PredictRaw(const TreeEnsemble& model,
                               std::span<const double> row);

std::vector<double> PredictProba(const TreeEnsemble& model,
                                 std::span<const double> row);

// Argmax of PredictProba; ties go to the lowest class index.
int Predict(const TreeEnsemble& model, std::span<const double> row);
std::vector<int> Predict(const TreeEnsemble& model, const Matrix& x);

// Mean negative log-likelihood of `labels`.
double LogLoss(const TreeEnsemble& model, const Matrix& x,
               std::span<const int> labels);

std::size_t ArgMax(std::span<const double> values);

}  // namespace cdoxai

#endif  // CDOXAI_FOREST_H_
