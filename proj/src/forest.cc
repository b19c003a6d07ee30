#include "cdoxai/forest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include "cdoxai/error.h"
#include "cdoxai/parallel.h"
#include "cdoxai/rng.h"

namespace cdoxai {

namespace {

using LeafFn = std::function<std::vector<double>(const std::vector<std::size_t>&)>;

// Greedy CART over generic per-sample target statistics. For a node holding
// samples with statistic sums S_j over n samples, the split score is
// sum_j S_j^2 / n summed over both children; maximizing it minimizes Gini
// impurity for one-hot targets and squared error for scalar targets.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> targets, int n_stats,
              const TreeParams& params, LeafFn leaf_value)
      : x_(x),
        targets_(targets),
        n_stats_(n_stats),
        params_(params),
        leaf_value_(std::move(leaf_value)),
        rng_(params.seed) {}

  Tree Build(std::vector<std::size_t> samples) {
    double total_ss = 0.0;
    for (std::size_t s : samples) {
      for (int j = 0; j < n_stats_; ++j) {
        const double t = targets_[s * n_stats_ + j];
        total_ss += t * t;
      }
    }
    min_gain_ = 1e-10 * total_ss;
    BuildNode(samples, 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  double Score(const std::vector<double>& sums, double n) const {
    double score = 0.0;
    for (double s : sums) score += s * s;
    return score / n;
  }

  Split FindSplit(const std::vector<std::size_t>& samples,
                  const std::vector<double>& parent_sums) {
    const std::size_t n_features = x_.cols();
    std::vector<std::size_t> order(n_features);
    std::iota(order.begin(), order.end(), 0);
    std::size_t budget = n_features;
    if (params_.max_features > 0 &&
        static_cast<std::size_t>(params_.max_features) < n_features) {
      rng_.Shuffle(order);
      budget = static_cast<std::size_t>(params_.max_features);
    }

    const double n = static_cast<double>(samples.size());
    const double parent_score = Score(parent_sums, n);
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
    Split best;
    best.gain = min_gain_;
    std::size_t evaluated = 0;
    std::vector<std::pair<double, std::size_t>> column(samples.size());
    std::vector<double> left(n_stats_);
    std::vector<double> right(n_stats_);

    for (std::size_t f : order) {
      if (evaluated >= budget) break;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        column[i] = {x_(samples[i], f), samples[i]};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++evaluated;

      std::fill(left.begin(), left.end(), 0.0);
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        const std::size_t s = column[i].second;
        for (int j = 0; j < n_stats_; ++j) left[j] += targets_[s * n_stats_ + j];
        const std::size_t n_left = i + 1;
        const std::size_t n_right = column.size() - n_left;
        if (column[i].first == column[i + 1].first) continue;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        for (int j = 0; j < n_stats_; ++j) right[j] = parent_sums[j] - left[j];
        const double gain = Score(left, static_cast<double>(n_left)) +
                            Score(right, static_cast<double>(n_right)) -
                            parent_score;
        if (gain > best.gain) {
          const double lo = column[i].first;
          const double hi = column[i + 1].first;
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid >= lo && mid < hi)) mid = lo;
          best = {static_cast<int>(f), mid, gain};
        }
      }
    }
    return best;
  }

  int BuildNode(const std::vector<std::size_t>& samples, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[index].cover = static_cast<double>(samples.size());

    std::vector<double> sums(n_stats_, 0.0);
    for (std::size_t s : samples) {
      for (int j = 0; j < n_stats_; ++j) sums[j] += targets_[s * n_stats_ + j];
    }

    Split split;
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
    if (depth < params_.max_depth && samples.size() >= 2 * min_leaf) {
      split = FindSplit(samples, sums);
    }
    if (split.feature < 0) {
      tree_.nodes[index].value = leaf_value_(samples);
      return index;
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t s : samples) {
      (x_(s, split.feature) <= split.threshold ? left : right).push_back(s);
    }
    tree_.nodes[index].feature = split.feature;
    tree_.nodes[index].threshold = split.threshold;
    const int l = BuildNode(left, depth + 1);
    const int r = BuildNode(right, depth + 1);
    tree_.nodes[index].left = l;
    tree_.nodes[index].right = r;
    return index;
  }

  const Matrix& x_;
  std::span<const double> targets_;
  int n_stats_;
  TreeParams params_;
  LeafFn leaf_value_;
  Rng rng_;
  Tree tree_;
  double min_gain_ = 0.0;
};

void CheckTrainingInput(const Matrix& x, std::span<const int> labels,
                        int n_classes) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw Error(ErrorCode::kEmptyInput, "training matrix is empty");
  }
  if (labels.size() != x.rows()) {
    throw Error(ErrorCode::kLengthMismatch,
                "matrix has " + std::to_string(x.rows()) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (n_classes < 1) throw Error(ErrorCode::kUnknownLabel, "no classes");
  for (int y : labels) {
    if (y < 0 || y >= n_classes) {
      throw Error(ErrorCode::kUnknownLabel,
                  "label " + std::to_string(y) + " outside [0, " +
                      std::to_string(n_classes) + ")");
    }
  }
}

std::vector<double> ClassPriors(std::span<const int> labels, int n_classes) {
  std::vector<double> priors(n_classes, 0.0);
  for (int y : labels) priors[y] += 1.0;
  for (double& p : priors) p /= static_cast<double>(labels.size());
  return priors;
}

void Softmax(std::span<const double> scores, std::span<double> out) {
  double top = -kScoreClamp;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (std::isnan(scores[k])) {
      throw Error(ErrorCode::kNonFiniteGradient, "class score is NaN");
    }
    out[k] = std::clamp(scores[k], -kScoreClamp, kScoreClamp);
    top = std::max(top, out[k]);
  }
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
}

}  // namespace

std::size_t Tree::LeafIndex(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& node = nodes[i];
    i = static_cast<std::size_t>(row[node.feature] <= node.threshold ? node.left
                                                                     : node.right);
  }
  return i;
}

int Tree::Depth() const {
  std::function<int(int)> depth = [&](int i) -> int {
    if (nodes[i].is_leaf()) return 0;
    return 1 + std::max(depth(nodes[i].left), depth(nodes[i].right));
  };
  return nodes.empty() ? 0 : depth(0);
}

std::string_view EnsembleKindName(EnsembleKind kind) {
  return kind == EnsembleKind::kRandomForest ? "random_forest"
                                              : "gradient_boosting";
}

EnsembleKind ParseEnsembleKind(std::string_view name) {
  if (name == "random_forest" || name == "rf") return EnsembleKind::kRandomForest;
  if (name == "gradient_boosting" || name == "gb") {
    return EnsembleKind::kGradientBoosting;
  }
  throw Error(ErrorCode::kConfig, "unknown model kind '" + std::string(name) + "'");
}

Tree TrainTree(const Matrix& x, std::span<const int> labels, int n_classes,
               const TreeParams& params, std::span<const std::size_t> sample) {
  CheckTrainingInput(x, labels, n_classes);
  std::vector<double> one_hot(x.rows() * n_classes, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    one_hot[i * n_classes + labels[i]] = 1.0;
  }
  std::vector<std::size_t> rows;
  if (sample.empty()) {
    rows.resize(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
  } else {
    rows.assign(sample.begin(), sample.end());
  }
  auto leaf = [&](const std::vector<std::size_t>& s) {
    std::vector<double> freq(n_classes, 0.0);
    for (std::size_t i : s) freq[labels[i]] += 1.0;
    for (double& v : freq) v /= static_cast<double>(s.size());
    return freq;
  };
  TreeBuilder builder(x, one_hot, n_classes, params, leaf);
  return builder.Build(std::move(rows));
}

TreeEnsemble TrainRandomForest(const Matrix& x, std::span<const int> labels,
                               int n_classes, const ForestParams& params,
                               std::vector<std::string> feature_names) {
  CheckTrainingInput(x, labels, n_classes);
  TreeEnsemble model;
  model.kind = EnsembleKind::kRandomForest;
  model.n_classes = n_classes;
  model.n_features = x.cols();
  model.feature_names = std::move(feature_names);
  model.seed = params.seed;
  model.base_value = ClassPriors(labels, n_classes);
  model.trees.resize(static_cast<std::size_t>(std::max(0, params.n_trees)));

  int max_features = params.max_features;
  if (max_features < 0) {
    max_features = std::max(
        1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
  }
  ParallelFor(model.trees.size(), [&](std::size_t t) {
    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.min_leaf = params.min_leaf;
    tp.max_features = max_features;
    tp.seed = DeriveSeed(params.seed, t);
    std::vector<std::size_t> sample;
    if (params.bootstrap) {
      Rng rng(DeriveSeed(tp.seed, 0xb007));
      sample.resize(x.rows());
      for (auto& s : sample) s = rng.UniformInt(x.rows());
    }
    model.trees[t] = TrainTree(x, labels, n_classes, tp, sample);
  });
  return model;
}

TreeEnsemble TrainGradientBoosting(const Matrix& x, std::span<const int> labels,
                                   int n_classes, const BoostingParams& params,
                                   std::vector<std::string> feature_names) {
  CheckTrainingInput(x, labels, n_classes);
  TreeEnsemble model;
  model.kind = EnsembleKind::kGradientBoosting;
  model.n_classes = n_classes;
  model.n_features = x.cols();
  model.feature_names = std::move(feature_names);
  model.seed = params.seed;
  const auto priors = ClassPriors(labels, n_classes);
  for (double p : priors) {
    model.base_value.push_back(
        p > 0.0 ? std::max(std::log(p), -kScoreClamp) : -kScoreClamp);
  }

  const std::size_t n = x.rows();
  const int k_classes = n_classes;
  std::vector<double> scores(n * k_classes);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(model.base_value.begin(), model.base_value.end(),
              scores.begin() + i * k_classes);
  }
  std::vector<double> prob(n * k_classes);
  std::vector<double> residual(n);
  std::vector<double> hessian(n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const double shrink =
      k_classes > 1 ? static_cast<double>(k_classes - 1) / k_classes : 1.0;

  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      Softmax(std::span<const double>(scores).subspan(i * k_classes, k_classes),
              std::span<double>(prob).subspan(i * k_classes, k_classes));
    }
    std::vector<Tree> round_trees;
    for (int k = 0; k < k_classes; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = prob[i * k_classes + k];
        residual[i] = (labels[i] == k ? 1.0 : 0.0) - p;
        hessian[i] = p * (1.0 - p);
      }
      auto leaf = [&, k](const std::vector<std::size_t>& s) {
        double g = 0.0;
        double h = 0.0;
        for (std::size_t i : s) {
          g += residual[i];
          h += hessian[i];
        }
        std::vector<double> value(k_classes, 0.0);
        value[k] = params.learning_rate * shrink * g / (h + 1e-6);
        if (!std::isfinite(value[k])) {
          throw Error(ErrorCode::kNonFiniteGradient, "leaf update is not finite");
        }
        return value;
      };
      TreeParams tp;
      tp.max_depth = params.max_depth;
      tp.min_leaf = params.min_leaf;
      tp.max_features = 0;
      tp.seed = DeriveSeed(params.seed, static_cast<std::uint64_t>(round) * 64 + k);
      TreeBuilder builder(x, residual, 1, tp, leaf);
      round_trees.push_back(builder.Build(all));
    }
    for (Tree& tree : round_trees) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& v = tree.Evaluate(x.row(i));
        for (int k = 0; k < k_classes; ++k) scores[i * k_classes + k] += v[k];
      }
      model.trees.push_back(std::move(tree));
    }
  }
  return model;
}

std::vector<double> PredictRaw(const TreeEnsemble& model,
                               std::span<const double> row) {
  if (row.size() != model.n_features) {
    throw Error(ErrorCode::kFeatureCountMismatch,
                "row has " + std::to_string(row.size()) + " features, model expects " +
                    std::to_string(model.n_features));
  }
  std::vector<double> out(model.n_classes, 0.0);
  if (model.kind == EnsembleKind::kRandomForest) {
    if (model.trees.empty()) return model.base_value;
    for (const Tree& tree : model.trees) {
      const auto& v = tree.Evaluate(row);
      for (int k = 0; k < model.n_classes; ++k) out[k] += v[k];
    }
    for (double& v : out) v /= static_cast<double>(model.trees.size());
    return out;
  }
  out = model.base_value;
  for (const Tree& tree : model.trees) {
    const auto& v = tree.Evaluate(row);
    for (int k = 0; k < model.n_classes; ++k) out[k] += v[k];
  }
  return out;
}

std::vector<double> PredictProba(const TreeEnsemble& model,
                                 std::span<const double> row) {
  std::vector<double> raw = PredictRaw(model, row);
  if (model.kind == EnsembleKind::kRandomForest) return raw;
  std::vector<double> prob(raw.size());
  Softmax(raw, prob);
  return prob;
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

int Predict(const TreeEnsemble& model, std::span<const double> row) {
  return static_cast<int>(ArgMax(PredictProba(model, row)));
}

std::vector<int> Predict(const TreeEnsemble& model, const Matrix& x) {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = Predict(model, x.row(i));
  return out;
}

double LogLoss(const TreeEnsemble& model, const Matrix& x,
               std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto p = PredictProba(model, x.row(i));
    total -= std::log(std::max(p[labels[i]], 1e-300));
  }
  return total / static_cast<double>(x.rows());
}

}  // namespace cdoxai
