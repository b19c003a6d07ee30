#ifndef CDOXAI_MODEL_IO_H_
#define CDOXAI_MODEL_IO_H_

#include <filesystem>
#include <string>

#include "cdoxai/forest.h"
#include "json.hpp"

namespace cdoxai {

inline constexpr int kModelFormatVersion = 1;

// Self-describing JSON: format_version, kind, n_classes, n_features,
// feature_names, seed, base_value and per-tree parallel node arrays. Doubles
// are written with round-trip precision, so a reloaded model predicts
// bit-identically.
nlohmann::json ModelToJson(const TreeEnsemble& model);

// Validates structure (child indices, leaf widths, cover consistency) and
// throws kInvalidModel on any violation.
TreeEnsemble ModelFromJson(const nlohmann::json& doc);

// `provenance` is stored under the "provenance" key when non-null.
void SaveModel(const std::filesystem::path& path, const TreeEnsemble& model,
               const nlohmann::json& provenance = nullptr);
TreeEnsemble LoadModel(const std::filesystem::path& path);

// Structural checks shared by the loader and the SHAP routines.
void ValidateTree(const Tree& tree, int n_classes, std::size_t n_features);

}  // namespace cdoxai

#endif  // CDOXAI_MODEL_IO_H_
