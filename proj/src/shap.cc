#include "cdoxai/shap.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cdoxai/error.h"
#include "cdoxai/parallel.h"

namespace cdoxai {

namespace {

struct PathElement {
  int feature;
  double zero_fraction;  // share of cover flowing this way when absent
  double one_fraction;   // 1 when the row follows this way, else 0
  double weight;
};

// Grows the subset-size weight polynomial by one feature. `depth` is the
// number of elements already on the path.
void ExtendPath(PathElement* path, int depth, double zero_fraction,
                double one_fraction, int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  const double denom = depth + 1;
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / denom;
    path[i].weight = zero_fraction * path[i].weight * (depth - i) / denom;
  }
}

// Inverse of ExtendPath for the element at `index`; `depth` is the last
// occupied index.
void UnwindPath(PathElement* path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  const double denom = depth + 1;
  double next = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double saved = path[i].weight;
      path[i].weight = next * denom / ((i + 1) * one);
      next = saved - path[i].weight * zero * (depth - i) / denom;
    } else {
      path[i].weight = path[i].weight * denom / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight of the path with element `index` removed.
double UnwoundSum(const PathElement* path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  const double denom = depth + 1;
  double next = path[depth].weight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = next * denom / ((i + 1) * one);
      total += tmp;
      next = path[i].weight - tmp * zero * (depth - i) / denom;
    } else {
      total += path[i].weight * denom / (zero * (depth - i));
    }
  }
  return total;
}

class ShapWalker {
 public:
  ShapWalker(const Tree& tree, std::span<const double> row, int n_outputs,
             std::span<double> phi)
      : tree_(tree), row_(row), n_outputs_(n_outputs), phi_(phi) {
    const int d = tree.Depth() + 2;
    buffer_.resize(static_cast<std::size_t>((d + 1) * (d + 2) / 2 + d + 2));
  }

  void Run() { Recurse(0, buffer_.data(), 0, 1.0, 1.0, -1); }

 private:
  void Recurse(int node_index, PathElement* parent_path, int depth,
               double zero_fraction, double one_fraction, int feature) {
    PathElement* path = parent_path + depth + 1;
    std::copy(parent_path, parent_path + depth + 1, path);
    ExtendPath(path, depth, zero_fraction, one_fraction, feature);

    const TreeNode& node = tree_.nodes[node_index];
    if (node.is_leaf()) {
      for (int i = 1; i <= depth; ++i) {
        const double w = UnwoundSum(path, depth, i);
        const PathElement& el = path[i];
        const double scale = w * (el.one_fraction - el.zero_fraction);
        double* out = phi_.data() + static_cast<std::size_t>(el.feature) * n_outputs_;
        for (int k = 0; k < n_outputs_; ++k) out[k] += scale * node.value[k];
      }
      return;
    }

    const bool goes_left = row_[node.feature] <= node.threshold;
    const int hot = goes_left ? node.left : node.right;
    const int cold = goes_left ? node.right : node.left;
    const double hot_fraction = tree_.nodes[hot].cover / node.cover;
    const double cold_fraction = tree_.nodes[cold].cover / node.cover;

    double incoming_zero = 1.0;
    double incoming_one = 1.0;
    int path_index = 0;
    for (; path_index <= depth; ++path_index) {
      if (path[path_index].feature == node.feature) break;
    }
    if (path_index <= depth) {
      incoming_zero = path[path_index].zero_fraction;
      incoming_one = path[path_index].one_fraction;
      UnwindPath(path, depth, path_index);
      --depth;
    }
    Recurse(hot, path, depth + 1, hot_fraction * incoming_zero, incoming_one,
            node.feature);
    Recurse(cold, path, depth + 1, cold_fraction * incoming_zero, 0.0,
            node.feature);
  }

  const Tree& tree_;
  std::span<const double> row_;
  int n_outputs_;
  std::span<double> phi_;
  std::vector<PathElement> buffer_;
};

void CheckCover(const Tree& tree, std::size_t n_features) {
  if (tree.nodes.empty()) throw Error(ErrorCode::kMissingCover, "empty tree");
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const TreeNode& node = tree.nodes[i];
    if (!(node.cover > 0.0) || !std::isfinite(node.cover)) {
      throw Error(ErrorCode::kMissingCover,
                  "node " + std::to_string(i) + " has no positive cover");
    }
    if (node.is_leaf()) continue;
    if (static_cast<std::size_t>(node.feature) >= n_features) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "node " + std::to_string(i) + " splits on feature " +
                      std::to_string(node.feature));
    }
    const double children =
        tree.nodes[node.left].cover + tree.nodes[node.right].cover;
    if (std::fabs(children - node.cover) > 1e-9 * node.cover) {
      throw Error(ErrorCode::kMissingCover,
                  "node " + std::to_string(i) +
                      " cover differs from the sum of its children");
    }
  }
}

void TreeShapInto(const Tree& tree, std::span<const double> row, int n_outputs,
                  std::span<double> phi) {
  if (tree.nodes.front().is_leaf()) return;
  ShapWalker walker(tree, row, n_outputs, phi);
  walker.Run();
}

}  // namespace

std::vector<double> TreeShap(const Tree& tree, std::span<const double> row,
                             std::size_t n_features, int n_outputs) {
  CheckCover(tree, n_features);
  if (row.size() != n_features) {
    throw Error(ErrorCode::kSchemaMismatch, "row width differs from n_features");
  }
  std::vector<double> phi(n_features * n_outputs, 0.0);
  TreeShapInto(tree, row, n_outputs, phi);
  return phi;
}

std::vector<double> TreeShap(const Tree& tree, std::span<const double> row,
                             std::size_t n_features, int n_outputs, int output) {
  const auto all = TreeShap(tree, row, n_features, n_outputs);
  std::vector<double> phi(n_features);
  for (std::size_t f = 0; f < n_features; ++f) phi[f] = all[f * n_outputs + output];
  return phi;
}

std::vector<double> TreeExpectedValue(const Tree& tree, int n_outputs) {
  std::vector<double> expected(n_outputs, 0.0);
  // Leaf covers partition the root cover, so the mean is a cover-weighted sum.
  const double root = tree.nodes.front().cover;
  for (const TreeNode& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    for (int k = 0; k < n_outputs; ++k) {
      expected[k] += node.cover / root * node.value[k];
    }
  }
  return expected;
}

std::string_view AttributionSpaceName(AttributionSpace space) {
  return space == AttributionSpace::kProbability ? "probability" : "log_odds";
}

double ShapMatrix::Binary(std::size_t sample, std::size_t feature,
                          int positive) const {
  if (space == AttributionSpace::kProbability) return at(sample, feature, positive);
  return at(sample, feature, positive) - at(sample, feature, 1 - positive);
}

double ShapMatrix::BinaryBase(int positive) const {
  if (space == AttributionSpace::kProbability) return base_values[positive];
  return base_values[positive] - base_values[1 - positive];
}

std::size_t ShapMatrix::FeatureIndex(std::string_view name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return i;
  }
  throw Error(ErrorCode::kUnknownFeature, "no feature named " + std::string(name));
}

ShapMatrix EnsembleShap(const TreeEnsemble& model, const Matrix& x,
                        std::span<const std::size_t> sample_ids) {
  if (x.cols() != model.n_features) {
    throw Error(ErrorCode::kSchemaMismatch,
                "matrix has " + std::to_string(x.cols()) +
                    " columns, model expects " + std::to_string(model.n_features));
  }
  for (const Tree& tree : model.trees) CheckCover(tree, model.n_features);

  const int k_out = model.n_classes;
  ShapMatrix shap;
  shap.n_samples = x.rows();
  shap.n_features = model.n_features;
  shap.n_classes = k_out;
  shap.values.assign(shap.n_samples * shap.n_features * k_out, 0.0);
  shap.feature_names = model.feature_names;
  if (shap.feature_names.empty()) {
    for (std::size_t f = 0; f < model.n_features; ++f) {
      shap.feature_names.push_back("f" + std::to_string(f));
    }
  }
  shap.inputs = x;
  if (sample_ids.empty()) {
    shap.sample_ids.resize(x.rows());
    std::iota(shap.sample_ids.begin(), shap.sample_ids.end(), 0);
  } else {
    shap.sample_ids.assign(sample_ids.begin(), sample_ids.end());
  }

  const bool forest = model.kind == EnsembleKind::kRandomForest;
  shap.space = forest ? AttributionSpace::kProbability : AttributionSpace::kLogOdds;
  const double tree_scale =
      forest && !model.trees.empty() ? 1.0 / static_cast<double>(model.trees.size())
                                     : 1.0;

  if (forest && !model.trees.empty()) {
    shap.base_values.assign(k_out, 0.0);
  } else {
    shap.base_values = model.base_value;
  }
  for (const Tree& tree : model.trees) {
    const auto e = TreeExpectedValue(tree, k_out);
    for (int k = 0; k < k_out; ++k) shap.base_values[k] += tree_scale * e[k];
  }

  const std::size_t width = shap.n_features * k_out;
  ParallelFor(shap.n_samples, [&](std::size_t s) {
    std::span<double> out(shap.values.data() + s * width, width);
    std::vector<double> phi(width);
    for (const Tree& tree : model.trees) {
      std::fill(phi.begin(), phi.end(), 0.0);
      TreeShapInto(tree, x.row(s), k_out, phi);
      for (std::size_t i = 0; i < width; ++i) out[i] += tree_scale * phi[i];
    }
  });
  return shap;
}

std::vector<std::string> GlobalImportance::Top(std::size_t n) const {
  std::vector<std::string> top;
  for (std::size_t i = 0; i < std::min(n, ranking.size()); ++i) {
    top.push_back(feature_names[ranking[i]]);
  }
  return top;
}

GlobalImportance ComputeGlobalImportance(std::span<const ShapMatrix> folds,
                                         int positive_class) {
  if (folds.empty()) throw Error(ErrorCode::kEmptyFolds, "no folds to aggregate");
  const std::size_t n_features = folds.front().n_features;
  std::vector<double> total(n_features, 0.0);
  std::size_t used_folds = 0;
  for (const ShapMatrix& fold : folds) {
    if (fold.n_features != n_features) {
      throw Error(ErrorCode::kSchemaMismatch, "folds disagree on feature count");
    }
    if (fold.n_samples == 0) continue;
    ++used_folds;
    std::vector<double> fold_mean(n_features, 0.0);
    for (std::size_t s = 0; s < fold.n_samples; ++s) {
      for (std::size_t f = 0; f < n_features; ++f) {
        double v = 0.0;
        if (positive_class < 0) {
          for (int k = 0; k < fold.n_classes; ++k) v += std::fabs(fold.at(s, f, k));
          v /= fold.n_classes;
        } else {
          v = std::fabs(fold.Binary(s, f, positive_class));
        }
        fold_mean[f] += v;
      }
    }
    for (std::size_t f = 0; f < n_features; ++f) {
      total[f] += fold_mean[f] / static_cast<double>(fold.n_samples);
    }
  }
  if (used_folds == 0) throw Error(ErrorCode::kEmptyFolds, "every fold is empty");

  GlobalImportance gi;
  gi.feature_names = folds.front().feature_names;
  gi.scores.resize(n_features);
  double sum = 0.0;
  for (std::size_t f = 0; f < n_features; ++f) {
    gi.scores[f] = total[f] / static_cast<double>(used_folds);
    sum += gi.scores[f];
  }
  if (sum > 0.0) {
    for (double& s : gi.scores) s /= sum;
  }
  gi.ranking.resize(n_features);
  std::iota(gi.ranking.begin(), gi.ranking.end(), 0);
  std::stable_sort(gi.ranking.begin(), gi.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return gi.scores[a] > gi.scores[b];
                   });
  return gi;
}

std::vector<std::pair<double, double>> ClassSpecificShap(
    std::span<const ShapMatrix> folds, std::string_view feature,
    int positive_class) {
  std::vector<std::pair<double, double>> pairs;
  for (const ShapMatrix& fold : folds) {
    const std::size_t f = fold.FeatureIndex(feature);
    for (std::size_t s = 0; s < fold.n_samples; ++s) {
      pairs.emplace_back(fold.inputs(s, f), fold.Binary(s, f, positive_class));
    }
  }
  return pairs;
}

WdReport ComputeWdReport(std::span<const ShapMatrix> folds, int positive_class,
                         double threshold, std::size_t top_n) {
  if (folds.empty()) throw Error(ErrorCode::kEmptyFolds, "no folds");
  const std::size_t n_features = folds.front().n_features;
  std::vector<std::vector<double>> class0(n_features);
  std::vector<std::vector<double>> class1(n_features);
  for (const ShapMatrix& fold : folds) {
    if (fold.labels.size() != fold.n_samples) {
      throw Error(ErrorCode::kLengthMismatch, "SHAP fold lacks sample labels");
    }
    for (std::size_t s = 0; s < fold.n_samples; ++s) {
      auto& bucket = fold.labels[s] == 0 ? class0 : class1;
      for (std::size_t f = 0; f < n_features; ++f) {
        bucket[f].push_back(fold.Binary(s, f, positive_class));
      }
    }
  }
  if (class0.front().empty() || class1.front().empty()) {
    throw Error(ErrorCode::kSingleClassData,
                "WD needs samples from both classes");
  }
  WdReport report;
  report.feature_names = folds.front().feature_names;
  report.threshold = threshold;
  for (std::size_t f = 0; f < n_features; ++f) {
    report.wd.push_back(Wasserstein1d(class0[f], class1[f]));
  }
  report.mean_wd = std::accumulate(report.wd.begin(), report.wd.end(), 0.0) /
                   static_cast<double>(n_features);
  std::vector<double> sorted = report.wd;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t top = std::min(top_n, sorted.size());
  report.top5_mean_wd =
      std::accumulate(sorted.begin(), sorted.begin() + top, 0.0) /
      static_cast<double>(top);
  report.count_above = static_cast<int>(
      std::count_if(report.wd.begin(), report.wd.end(),
                    [&](double w) { return w > threshold; }));
  return report;
}

}  // namespace cdoxai
