#include "cdoxai/model_io.h"

#include <cmath>
#include <fstream>

#include "cdoxai/error.h"

namespace cdoxai {

namespace {

[[noreturn]] void Invalid(const std::string& why) {
  throw Error(ErrorCode::kInvalidModel, why);
}

}  // namespace

void ValidateTree(const Tree& tree, int n_classes, std::size_t n_features) {
  if (tree.nodes.empty()) Invalid("tree without nodes");
  const int n = static_cast<int>(tree.nodes.size());
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) {
      if (static_cast<int>(node.value.size()) != n_classes) {
        Invalid("leaf " + std::to_string(i) + " has " +
                std::to_string(node.value.size()) + " values, expected " +
                std::to_string(n_classes));
      }
      continue;
    }
    if (static_cast<std::size_t>(node.feature) >= n_features) {
      Invalid("node " + std::to_string(i) + " splits on feature " +
              std::to_string(node.feature));
    }
    if (!std::isfinite(node.threshold)) {
      Invalid("node " + std::to_string(i) + " has a non-finite threshold");
    }
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n) {
      Invalid("node " + std::to_string(i) + " has bad child indices");
    }
  }
}

nlohmann::json ModelToJson(const TreeEnsemble& model) {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = std::string(EnsembleKindName(model.kind));
  doc["n_classes"] = model.n_classes;
  doc["n_features"] = model.n_features;
  doc["feature_names"] = model.feature_names;
  doc["seed"] = model.seed;
  doc["base_value"] = model.base_value;
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : model.trees) {
    nlohmann::json t;
    std::vector<int> feature, left, right;
    std::vector<double> threshold, cover;
    nlohmann::json value = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      cover.push_back(node.cover);
      value.push_back(node.value);
    }
    t["feature"] = feature;
    t["threshold"] = threshold;
    t["left"] = left;
    t["right"] = right;
    t["cover"] = cover;
    t["value"] = value;
    trees.push_back(std::move(t));
  }
  doc["trees"] = std::move(trees);
  return doc;
}

TreeEnsemble ModelFromJson(const nlohmann::json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kModelFormatVersion) {
      Invalid("unsupported format_version");
    }
    TreeEnsemble model;
    model.kind = ParseEnsembleKind(doc.at("kind").get<std::string>());
    model.n_classes = doc.at("n_classes").get<int>();
    model.n_features = doc.at("n_features").get<std::size_t>();
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.base_value = doc.at("base_value").get<std::vector<double>>();
    if (model.n_classes < 1 ||
        static_cast<int>(model.base_value.size()) != model.n_classes) {
      Invalid("base_value width does not match n_classes");
    }
    if (!model.feature_names.empty() &&
        model.feature_names.size() != model.n_features) {
      Invalid("feature_names width does not match n_features");
    }
    for (const auto& t : doc.at("trees")) {
      const auto feature = t.at("feature").get<std::vector<int>>();
      const auto threshold = t.at("threshold").get<std::vector<double>>();
      const auto left = t.at("left").get<std::vector<int>>();
      const auto right = t.at("right").get<std::vector<int>>();
      const auto cover = t.at("cover").get<std::vector<double>>();
      const auto& value = t.at("value");
      const std::size_t n = feature.size();
      if (threshold.size() != n || left.size() != n || right.size() != n ||
          cover.size() != n || value.size() != n) {
        Invalid("tree node arrays differ in length");
      }
      Tree tree;
      tree.nodes.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        TreeNode& node = tree.nodes[i];
        node.feature = feature[i];
        node.threshold = threshold[i];
        node.left = left[i];
        node.right = right[i];
        node.cover = cover[i];
        node.value = value[i].get<std::vector<double>>();
      }
      ValidateTree(tree, model.n_classes, model.n_features);
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    Invalid(std::string("malformed model document: ") + e.what());
  }
}

void SaveModel(const std::filesystem::path& path, const TreeEnsemble& model,
               const nlohmann::json& provenance) {
  nlohmann::json doc = ModelToJson(model);
  if (!provenance.is_null()) doc["provenance"] = provenance;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << doc.dump() << '\n';
}

TreeEnsemble LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    Invalid(path.string() + ": " + e.what());
  }
  return ModelFromJson(doc);
}

}  // namespace cdoxai
