#ifndef CDOXAI_CONFIG_H_
#define CDOXAI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/cv.h"
#include "cdoxai/features.h"
#include "cdoxai/fexai.h"
#include "cdoxai/ingest.h"
#include "cdoxai/synth.h"

namespace cdoxai {

// Every tunable of the pipeline. The config file is flat `key = value`
// text; '#' starts a comment. Keys match the names returned by Keys().
struct PipelineConfig {
  TmaConfig tma;
  double level_threshold = kDefaultLevelThreshold;
  AdherenceThresholds adherence;
  int high_positive_class = 1;  // positive class of high_vs_nothigh

  ForestParams forest;
  BoostingParams boosting;
  int k_folds = 5;
  std::uint64_t seed = 42;

  std::array<double, 6> fuzzy_crossings{0.026, 0.044, 238, 767, 1.375, 2.125};
  double fuzzy_shoulder = 0.25;

  std::size_t synth_flights = 1000;
  LabelMode synth_mode = LabelMode::kGeometric;
  std::string synth_rules;  // rule table used by rule mode

  std::string out_dir = "out";

  static std::vector<std::string> Keys();
  // Throws kConfig for unknown keys or unparsable values.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;
  // Throws kConfig when thresholds are unordered or k_folds < 2.
  void Validate() const;

  // Sorted `key=value` lines; out_dir is excluded so relocating outputs keeps
  // the hash.
  std::string Canonical() const;
  // 16 hex digits of FNV-1a over Canonical().
  std::string Hash() const;

  FeatureConfig features() const;
  FuzzyPartition partition() const;
  ScenarioSpec scenario(ScenarioId id) const;
  ModelSpec model(EnsembleKind kind) const;
};

void ApplyConfig(std::istream& in, PipelineConfig& config);
void ApplyConfigFile(const std::filesystem::path& path, PipelineConfig& config);

std::uint64_t Fnv1a64(std::string_view data);

}  // namespace cdoxai

#endif  // CDOXAI_CONFIG_H_
