#include "cdoxai/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "cdoxai/csv.h"
#include "cdoxai/error.h"

namespace cdoxai {

namespace {

struct Field {
  std::string_view key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, std::string_view)> set;
};

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kConfig,
              "bad value '" + std::string(value) + "' for " + std::string(key));
}

double ToDouble(std::string_view key, std::string_view value) {
  const auto v = csv::ParseDouble(value);
  if (!v || !std::isfinite(*v)) BadValue(key, value);
  return *v;
}

std::int64_t ToInt(std::string_view key, std::string_view value) {
  const auto v = csv::ParseInt(value);
  if (!v) BadValue(key, value);
  return *v;
}

Field DoubleField(std::string_view key, double PipelineConfig::*member) {
  return {key, [member](const PipelineConfig& c) { return csv::FormatDouble(c.*member); },
          [key, member](PipelineConfig& c, std::string_view v) { c.*member = ToDouble(key, v); }};
}

template <typename Get>
Field DoubleRef(std::string_view key, Get ref) {
  return {key,
          [ref](const PipelineConfig& c) {
            return csv::FormatDouble(ref(const_cast<PipelineConfig&>(c)));
          },
          [key, ref](PipelineConfig& c, std::string_view v) { ref(c) = ToDouble(key, v); }};
}

template <typename Get>
Field IntRef(std::string_view key, Get ref) {
  return {key,
          [ref](const PipelineConfig& c) {
            return std::to_string(ref(const_cast<PipelineConfig&>(c)));
          },
          [key, ref](PipelineConfig& c, std::string_view v) {
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(ToInt(key, v));
          }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back(DoubleRef("tma_center_lat", [](PipelineConfig& c) -> double& { return c.tma.center_lat; }));
    f.push_back(DoubleRef("tma_center_lon", [](PipelineConfig& c) -> double& { return c.tma.center_lon; }));
    f.push_back(DoubleRef("tma_radius_nm", [](PipelineConfig& c) -> double& { return c.tma.radius_nm; }));
    f.push_back(DoubleRef("tma_floor_ft", [](PipelineConfig& c) -> double& { return c.tma.altitude_floor_ft; }));
    f.push_back(DoubleField("level_threshold", &PipelineConfig::level_threshold));
    f.push_back(DoubleRef("adherence_medium", [](PipelineConfig& c) -> double& { return c.adherence.medium; }));
    f.push_back(DoubleRef("adherence_high", [](PipelineConfig& c) -> double& { return c.adherence.high; }));
    f.push_back(IntRef("high_positive_class", [](PipelineConfig& c) -> int& { return c.high_positive_class; }));
    f.push_back(IntRef("rf_trees", [](PipelineConfig& c) -> int& { return c.forest.n_trees; }));
    f.push_back(IntRef("rf_max_depth", [](PipelineConfig& c) -> int& { return c.forest.max_depth; }));
    f.push_back(IntRef("rf_min_leaf", [](PipelineConfig& c) -> int& { return c.forest.min_leaf; }));
    f.push_back(IntRef("rf_max_features", [](PipelineConfig& c) -> int& { return c.forest.max_features; }));
    f.push_back(IntRef("gb_rounds", [](PipelineConfig& c) -> int& { return c.boosting.n_rounds; }));
    f.push_back(DoubleRef("gb_learning_rate", [](PipelineConfig& c) -> double& { return c.boosting.learning_rate; }));
    f.push_back(IntRef("gb_max_depth", [](PipelineConfig& c) -> int& { return c.boosting.max_depth; }));
    f.push_back(IntRef("gb_min_leaf", [](PipelineConfig& c) -> int& { return c.boosting.min_leaf; }));
    f.push_back(IntRef("k_folds", [](PipelineConfig& c) -> int& { return c.k_folds; }));
    f.push_back({"seed", [](const PipelineConfig& c) { return std::to_string(c.seed); },
                 [](PipelineConfig& c, std::string_view v) {
                   const auto s = ToInt("seed", v);
                   if (s < 0) BadValue("seed", v);
                   c.seed = static_cast<std::uint64_t>(s);
                 }});
    static constexpr std::array<std::string_view, 6> kCrossings = {
        "mdrate_lower", "mdrate_upper", "fltsegments_lower",
        "fltsegments_upper", "mdirection_lower", "mdirection_upper"};
    for (int i = 0; i < 6; ++i) {
      f.push_back(DoubleRef(kCrossings[i], [i](PipelineConfig& c) -> double& {
        return c.fuzzy_crossings[i];
      }));
    }
    f.push_back(DoubleField("fuzzy_shoulder", &PipelineConfig::fuzzy_shoulder));
    f.push_back({"synth_flights", [](const PipelineConfig& c) { return std::to_string(c.synth_flights); },
                 [](PipelineConfig& c, std::string_view v) {
                   const auto n = ToInt("synth_flights", v);
                   if (n < 0) BadValue("synth_flights", v);
                   c.synth_flights = static_cast<std::size_t>(n);
                 }});
    f.push_back({"synth_mode",
                 [](const PipelineConfig& c) { return std::string(LabelModeName(c.synth_mode)); },
                 [](PipelineConfig& c, std::string_view v) { c.synth_mode = ParseLabelMode(v); }});
    f.push_back({"synth_rules", [](const PipelineConfig& c) { return c.synth_rules; },
                 [](PipelineConfig& c, std::string_view v) { c.synth_rules = std::string(v); }});
    f.push_back({"out_dir", [](const PipelineConfig& c) { return c.out_dir; },
                 [](PipelineConfig& c, std::string_view v) { c.out_dir = std::string(v); }});
    return f;
  }();
  return fields;
}

const Field& FindField(std::string_view key) {
  for (const Field& f : Fields()) {
    if (f.key == key) return f;
  }
  throw Error(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

std::vector<std::string> PipelineConfig::Keys() {
  std::vector<std::string> keys;
  for (const Field& f : Fields()) keys.emplace_back(f.key);
  return keys;
}

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  FindField(key).set(*this, value);
}

std::string PipelineConfig::Get(std::string_view key) const {
  return FindField(key).get(*this);
}

void PipelineConfig::Validate() const {
  tma.Validate();
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kConfig, why); };
  if (!(level_threshold >= 0.0)) fail("level_threshold must be >= 0");
  if (!(0.0 < adherence.medium && adherence.medium < adherence.high &&
        adherence.high <= 1.0)) {
    fail("adherence thresholds must satisfy 0 < medium < high <= 1");
  }
  if (high_positive_class != 0 && high_positive_class != 1) {
    fail("high_positive_class must be 0 or 1");
  }
  if (k_folds < 2) fail("k_folds must be >= 2");
  if (forest.n_trees < 1 || forest.max_depth < 1 || forest.min_leaf < 1) {
    fail("random forest hyperparameters must be positive");
  }
  if (boosting.n_rounds < 1 || boosting.max_depth < 1 || boosting.min_leaf < 1 ||
      !(boosting.learning_rate > 0.0)) {
    fail("boosting hyperparameters must be positive");
  }
  partition();  // validates crossings and shoulder
}

std::string PipelineConfig::Canonical() const {
  std::vector<std::string> lines;
  for (const Field& f : Fields()) {
    if (f.key == "out_dir") continue;
    lines.push_back(std::string(f.key) + "=" + f.get(*this));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string PipelineConfig::Hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(Canonical())));
  return buf;
}

FeatureConfig PipelineConfig::features() const {
  FeatureConfig cfg;
  cfg.level_threshold = level_threshold;
  cfg.adherence = adherence;
  return cfg;
}

FuzzyPartition PipelineConfig::partition() const {
  FuzzyPartition p = FuzzyPartition::Default(fuzzy_shoulder);
  for (int i = 0; i < 3; ++i) {
    p.features[i].lower = fuzzy_crossings[2 * i];
    p.features[i].upper = fuzzy_crossings[2 * i + 1];
    p.features[i].Validate();
  }
  return p;
}

ScenarioSpec PipelineConfig::scenario(ScenarioId id) const {
  return ScenarioSpec::Make(
      id, id == ScenarioId::kHighVsNotHigh ? high_positive_class : -2);
}

ModelSpec PipelineConfig::model(EnsembleKind kind) const {
  ModelSpec spec;
  spec.kind = kind;
  spec.forest = forest;
  spec.boosting = boosting;
  return spec;
}

void ApplyConfig(std::istream& in, PipelineConfig& config) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = csv::Trim(raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "expected key = value", line);
    }
    try {
      config.Set(csv::Trim(text.substr(0, eq)), csv::Trim(text.substr(eq + 1)));
    } catch (const Error& e) {
      if (e.line() != 0) throw;
      throw Error(e.code(), e.detail(), line);
    }
  }
}

void ApplyConfigFile(const std::filesystem::path& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  ApplyConfig(in, config);
}

}  // namespace cdoxai
