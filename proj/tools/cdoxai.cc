// Command-line driver: one subcommand per pipeline stage, handing off
// through files in the output directory.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdoxai/config.h"
#include "cdoxai/csv.h"
#include "cdoxai/error.h"
#include "cdoxai/features.h"
#include "cdoxai/ingest.h"
#include "cdoxai/model_io.h"
#include "cdoxai/pipeline.h"
#include "cdoxai/report.h"
#include "cdoxai/svg.h"
#include "cdoxai/synth.h"

namespace cdoxai {
namespace {

namespace fs = std::filesystem;

constexpr ScenarioId kScenarios[] = {ScenarioId::kThreeClass, ScenarioId::kLowVsNotLow,
                                     ScenarioId::kHighVsNotHigh};
constexpr EnsembleKind kKinds[] = {EnsembleKind::kRandomForest,
                                   EnsembleKind::kGradientBoosting};

std::string ClassifierName(EnsembleKind kind) {
  return kind == EnsembleKind::kRandomForest ? "RF" : "GB";
}

EnsembleKind KindFromClassifier(std::string_view name) {
  if (name == "RF") return EnsembleKind::kRandomForest;
  if (name == "GB") return EnsembleKind::kGradientBoosting;
  return ParseEnsembleKind(name);
}

struct Context {
  PipelineConfig config;
  fs::path out;

  fs::path Path(const std::string& name) const { return out / name; }
  std::vector<std::string> Stamp(std::string_view stage) const {
    return Provenance(config, stage);
  }
};

// Throws unless `path` exists and, when it carries a config hash, that hash
// matches the current configuration.
void Require(const Context& ctx, const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, "missing " + path.string() + "; run `cdoxai " +
                                    std::string(producer) + "` first");
  }
  std::ifstream in(path);
  std::string line;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) {
    const auto pos = line.find("config_hash=");
    if (pos == std::string::npos) continue;
    const std::string hash = line.substr(pos + 12, 16);
    if (hash != ctx.config.Hash()) {
      throw Error(ErrorCode::kIo, path.string() + " was produced under config " + hash +
                                          " but the current config is " +
                                          ctx.config.Hash() + "; rerun `cdoxai " +
                                          std::string(producer) + "`");
    }
    return;
  }
}

void WriteFile(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  body(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void WriteJson(const fs::path& path, nlohmann::json doc, const Context& ctx,
               std::string_view stage) {
  doc["provenance"] = {{"stage", std::string(stage)},
                       {"config_hash", ctx.config.Hash()},
                       {"seed", ctx.config.seed}};
  WriteFile(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

nlohmann::json ReadJson(const Context& ctx, const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, "missing " + path.string() + "; run `cdoxai " +
                                    std::string(producer) + "` first");
  }
  std::ifstream in(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
  }
  const auto& p = doc.value("provenance", nlohmann::json::object());
  if (p.contains("config_hash") && p["config_hash"] != ctx.config.Hash()) {
    throw Error(ErrorCode::kIo, path.string() + " was produced under config " +
                                        p["config_hash"].get<std::string>() +
                                        "; rerun `cdoxai " + std::string(producer) + "`");
  }
  return doc;
}

void Warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

Dataset LoadDataset(const Context& ctx) {
  const fs::path path = ctx.Path("dataset.csv");
  Require(ctx, path, "features");
  return ReadDatasetCsv(path);
}

fs::path ModelPath(const Context& ctx, ScenarioId s, EnsembleKind k, int fold) {
  std::string name = std::string(ScenarioIdName(s)) + "_" + std::string(EnsembleKindName(k));
  if (fold >= 0) name += "_fold" + std::to_string(fold);
  return ctx.out / "models" / (name + ".json");
}

void Synth(const Context& ctx) {
  const PipelineConfig& cfg = ctx.config;
  SynthSpec spec;
  spec.n_flights = cfg.synth_flights;
  spec.seed = cfg.seed;
  spec.mode = cfg.synth_mode;
  spec.tma = cfg.tma;
  spec.partition = cfg.partition();
  if (spec.mode == LabelMode::kRule) {
    if (cfg.synth_rules.empty()) {
      throw Error(ErrorCode::kConfig, "synth_mode = rule needs synth_rules");
    }
    spec.rules = ParseRuleBase(fs::path(cfg.synth_rules), spec.partition);
  }
  spec.Validate();
  std::vector<ArrivalTrack> tracks;
  std::vector<FlightWeather> weather;
  std::vector<TrackTruth> truth;
  for (std::size_t i = 0; i < spec.n_flights; ++i) {
    GeneratedTrack g = GenerateTrack(spec, i);
    tracks.push_back(std::move(g.track));
    weather.push_back(std::move(g.weather));
    truth.push_back(std::move(g.truth));
  }
  const auto stamp = ctx.Stamp("synth");
  WriteFile(ctx.Path("tracks.csv"), [&](std::ostream& out) {
    WriteComments(out, stamp);
    WriteTrackCsv(out, tracks);
  });
  WriteFile(ctx.Path("weather.csv"), [&](std::ostream& out) {
    WriteComments(out, stamp);
    WriteWeatherCsv(out, weather);
  });
  WriteFile(ctx.Path("synth_truth.csv"), [&](std::ostream& out) {
    WriteComments(out, stamp);
    out << "flight_id,n_segments,level_offs,adherence,gradient,mdirection,rule_label\n";
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const TrackTruth& t = truth[i];
      out << tracks[i].flight_id << ',' << t.n_segments << ',' << t.level_offs << ','
          << csv::FormatDouble(t.adherence) << ',' << csv::FormatDouble(t.gradient) << ','
          << csv::FormatDouble(t.mdirection) << ',' << t.rule_label << '\n';
    }
  });
  std::cout << "synth: " << tracks.size() << " flights (" << LabelModeName(spec.mode)
            << " labels) -> " << ctx.Path("tracks.csv").string() << '\n';
}

void Ingest(const Context& ctx, const std::string& input) {
  const fs::path source = input.empty() ? ctx.Path("tracks.csv") : fs::path(input);
  Require(ctx, source, "synth");
  TrackParseResult parsed = ParseTrackCsv(source);
  Warn(parsed.warnings);
  std::vector<ArrivalTrack> kept;
  std::size_t dropped = 0;
  for (const ArrivalTrack& t : parsed.tracks) {
    try {
      kept.push_back(ClipToTma(t, ctx.config.tma));
    } catch (const Error& e) {
      std::cerr << "warning: dropping " << t.flight_id << ": " << e.what() << '\n';
      ++dropped;
    }
  }
  WriteFile(ctx.Path("clipped.csv"), [&](std::ostream& out) {
    WriteComments(out, ctx.Stamp("ingest"));
    WriteTrackCsv(out, kept);
  });
  std::cout << "ingest: " << kept.size() << " flights clipped to the TMA, " << dropped
            << " dropped -> " << ctx.Path("clipped.csv").string() << '\n';
}

void Features(const Context& ctx, const std::string& weather_input) {
  fs::path tracks_path = ctx.Path("clipped.csv");
  if (!fs::exists(tracks_path)) tracks_path = ctx.Path("tracks.csv");
  Require(ctx, tracks_path, "ingest` or `cdoxai synth");
  const fs::path weather_path =
      weather_input.empty() ? ctx.Path("weather.csv") : fs::path(weather_input);
  Require(ctx, weather_path, "synth");

  TrackParseResult tracks = ParseTrackCsv(tracks_path);
  Warn(tracks.warnings);
  WeatherParseResult weather = ParseWeatherCsv(weather_path);
  Warn(weather.warnings);

  const FeatureConfig fcfg = ctx.config.features();
  std::vector<FlightFeatures> rows;
  std::size_t skipped = 0;
  for (const ArrivalTrack& t : tracks.tracks) {
    try {
      const ArrivalTrack clipped = ClipToTma(t, ctx.config.tma);
      const auto w = weather.records.find(t.flight_id);
      if (w == weather.records.end() || !w->second.start || !w->second.end) {
        throw Error(ErrorCode::kIncompleteRow, "no start/end weather record");
      }
      FlightFeatures f = JoinWeather(ComputeFlightFeatures(clipped, ctx.config.tma, fcfg),
                                     *w->second.start, *w->second.end);
      AssembleDataset(std::span<const FlightFeatures>(&f, 1));  // completeness check
      rows.push_back(std::move(f));
    } catch (const Error& e) {
      std::cerr << "warning: skipping " << t.flight_id << ": " << e.what() << '\n';
      ++skipped;
    }
  }
  const Dataset ds = AssembleDataset(rows);
  WriteFile(ctx.Path("dataset.csv"),
            [&](std::ostream& out) { WriteDatasetCsv(out, ds, ctx.Stamp("features")); });
  std::array<int, 3> counts{};
  for (int label : ds.labels) ++counts[label];
  std::cout << "features: " << ds.size() << " flights (Low " << counts[0] << ", Medium "
            << counts[1] << ", High " << counts[2] << "), " << skipped << " skipped -> "
            << ctx.Path("dataset.csv").string() << '\n';
}

void Train(const Context& ctx) {
  const Dataset ds = LoadDataset(ctx);
  std::vector<MetricsRow> rows;
  for (ScenarioId s : kScenarios) {
    for (EnsembleKind k : kKinds) {
      const ScenarioRun run = RunScenario(ctx.config, ds, s, k);
      nlohmann::json prov = {{"config_hash", ctx.config.Hash()},
                             {"seed", ctx.config.seed},
                             {"scenario", std::string(ScenarioIdName(s))}};
      for (std::size_t f = 0; f < run.cv.models.size(); ++f) {
        prov["fold"] = f;
        const fs::path p = ModelPath(ctx, s, k, static_cast<int>(f));
        fs::create_directories(p.parent_path());
        SaveModel(p, run.cv.models[f], prov);
      }
      prov.erase("fold");
      SaveModel(ModelPath(ctx, s, k, -1),
                TrainModel(ctx.config.model(k), ds.features, run.labels,
                           run.scenario.n_classes(), ds.feature_names, ctx.config.seed),
                prov);
      rows.push_back({std::string(ScenarioIdName(s)), ClassifierName(k), run.cv.report.mean});
      const Metrics& m = run.cv.report.mean;
      std::printf("train: %-15s %s acc %.3f pr %.3f recall %.3f f1 %.3f\n",
                  std::string(ScenarioIdName(s)).c_str(), ClassifierName(k).c_str(),
                  m.accuracy, m.precision, m.recall, m.f1);
    }
  }
  WriteFile(ctx.Path("cv_metrics.csv"), [&](std::ostream& out) {
    WriteMetricsCsv(out, rows, true, ctx.Stamp("train"));
  });
}

std::vector<TreeEnsemble> LoadFoldModels(const Context& ctx, ScenarioId s, EnsembleKind k) {
  std::vector<TreeEnsemble> models;
  for (int f = 0; f < ctx.config.k_folds; ++f) {
    const nlohmann::json doc = ReadJson(ctx, ModelPath(ctx, s, k, f), "train");
    models.push_back(ModelFromJson(doc));
  }
  return models;
}

// Model kind per scenario with the higher cross-validated accuracy (RF on ties).
EnsembleKind BestKind(const std::vector<MetricsRow>& rows, ScenarioId s) {
  std::optional<MetricsRow> best;
  for (const MetricsRow& r : rows) {
    if (r.scenario != ScenarioIdName(s)) continue;
    if (!best || r.metrics.accuracy > best->metrics.accuracy) best = r;
  }
  if (!best) {
    throw Error(ErrorCode::kMalformedRow,
                "cv_metrics.csv has no rows for " + std::string(ScenarioIdName(s)));
  }
  return KindFromClassifier(best->classifier);
}

void Explain(const Context& ctx, const std::string& model_choice) {
  const Dataset ds = LoadDataset(ctx);
  const fs::path metrics_path = ctx.Path("cv_metrics.csv");
  Require(ctx, metrics_path, "train");
  std::ifstream metrics_in(metrics_path);
  const auto rows = ReadMetricsCsv(metrics_in);

  for (ScenarioId s : kScenarios) {
    const EnsembleKind kind = model_choice == "best" ? BestKind(rows, s)
                                                     : KindFromClassifier(model_choice);
    const ScenarioSpec scenario = ctx.config.scenario(s);
    const auto labels = Relabel(ds.labels, scenario);
    const Folds folds = StratifiedKFold(labels, ctx.config.k_folds, ctx.config.seed);
    const auto models = LoadFoldModels(ctx, s, kind);
    const auto shap = ExplainFolds(models, folds, ds.features, labels);
    const Explanation e = Summarize(scenario, kind, shap);
    const std::string name(ScenarioIdName(s));
    const auto stamp = ctx.Stamp("explain");

    WriteFile(ctx.Path("shap_" + name + ".csv"),
              [&](std::ostream& out) { WriteShapCsv(out, shap, stamp); });
    WriteJson(ctx.Path("explain_" + name + ".json"), ExplanationToJson(e), ctx, "explain");
    if (scenario.binary()) {
      for (std::string_view feature : kFexaiFeatures) {
        WriteFile(ctx.Path("dependence_" + name + "_" + std::string(feature) + ".csv"),
                  [&](std::ostream& out) {
                    WriteDependenceCsv(out, shap, feature, e.positive_class, stamp);
                  });
      }
    }
    std::cout << "explain: " << name << " (" << EnsembleKindName(kind) << ", "
              << AttributionSpaceName(e.space) << ") top-3:";
    for (const auto& f : e.importance.Top(3)) std::cout << ' ' << f;
    if (e.wd) std::cout << "; mean WD " << e.wd->mean_wd;
    std::cout << '\n';
  }
}

void Fexai(const Context& ctx) {
  const Dataset ds = LoadDataset(ctx);
  const TopFeatureComparison cmp = CompareOnRuleInputs(ctx.config, ds);
  const FuzzyPartition partition = ctx.config.partition();
  const auto stamp = ctx.Stamp("fexai");
  WriteFile(ctx.Path("fexai_rules.txt"), [&](std::ostream& out) {
    WriteComments(out, stamp);
    out << FormatRuleBase(cmp.fexai.rules, partition, true);
  });
  const std::vector<MetricsRow> rows = {
      {"", "FEXAI", cmp.fexai.report.mean},
      {"", "RF", cmp.forest.report.mean},
      {"", "GB", cmp.boosting.report.mean}};
  WriteFile(ctx.Path("fexai_metrics.csv"),
            [&](std::ostream& out) { WriteMetricsCsv(out, rows, false, stamp); });
  std::printf("fexai: %zu rules, acc %.3f (RF %.3f, GB %.3f) -> %s\n",
              cmp.fexai.rules.rules.size(), cmp.fexai.report.mean.accuracy,
              cmp.forest.report.mean.accuracy, cmp.boosting.report.mean.accuracy,
              ctx.Path("fexai_rules.txt").string().c_str());
}

std::vector<MetricsRow> ReadMetricsFile(const Context& ctx, const fs::path& path,
                                        std::string_view producer) {
  Require(ctx, path, producer);
  std::ifstream in(path);
  return ReadMetricsCsv(in);
}

void Report(const Context& ctx) {
  const fs::path dir = ctx.Path("report");
  const auto stamp = ctx.Stamp("report");
  std::string comment;
  for (const auto& s : stamp) comment += (comment.empty() ? "" : "; ") + s;

  const auto table_i = ReadMetricsFile(ctx, ctx.Path("cv_metrics.csv"), "train");
  WriteFile(dir / "table_i.csv",
            [&](std::ostream& out) { WriteMetricsCsv(out, table_i, true, stamp); });

  std::vector<SeparabilityRow> table_ii;
  for (ScenarioId s : kScenarios) {
    const std::string name(ScenarioIdName(s));
    const Explanation e =
        ExplanationFromJson(ReadJson(ctx, ctx.Path("explain_" + name + ".json"), "explain"));
    std::vector<std::string> labels;
    std::vector<double> values;
    for (std::size_t i = 0; i < std::min<std::size_t>(15, e.importance.ranking.size()); ++i) {
      const std::size_t f = e.importance.ranking[i];
      labels.push_back(e.importance.feature_names[f]);
      values.push_back(e.importance.scores[f]);
    }
    const std::string title = "Global importance, " + name + " (" +
                              std::string(EnsembleKindName(e.kind)) + ", " +
                              std::string(AttributionSpaceName(e.space)) + ")";
    WriteFile(dir / ("importance_" + name + ".svg"),
              [&](std::ostream& out) { out << BarChartSvg(title, labels, values, comment); });
    if (e.wd) table_ii.push_back({name, *e.wd});
  }
  WriteFile(dir / "table_ii.csv",
            [&](std::ostream& out) { WriteSeparabilityCsv(out, table_ii, stamp); });

  const auto table_iv = ReadMetricsFile(ctx, ctx.Path("fexai_metrics.csv"), "fexai");
  WriteFile(dir / "table_iv.csv",
            [&](std::ostream& out) { WriteMetricsCsv(out, table_iv, false, stamp); });

  const fs::path rules_path = ctx.Path("fexai_rules.txt");
  Require(ctx, rules_path, "fexai");
  const FuzzyPartition partition = ctx.config.partition();
  const RuleBase rules = ParseRuleBase(rules_path, partition);
  WriteFile(dir / "table_v.txt", [&](std::ostream& out) {
    WriteComments(out, stamp);
    out << FormatRuleBase(rules, partition, false);
  });

  const std::string scenario(ScenarioIdName(ScenarioId::kLowVsNotLow));
  for (std::string_view feature : kFexaiFeatures) {
    const fs::path p = ctx.Path("dependence_" + scenario + "_" + std::string(feature) + ".csv");
    Require(ctx, p, "explain");
    std::ifstream in(p);
    const auto points = ReadDependenceCsv(in);
    WriteFile(dir / ("dependence_" + std::string(feature) + ".svg"), [&](std::ostream& out) {
      out << ScatterSvg(std::string(feature) + " attribution toward NotLow",
                        std::string(feature), "SHAP value", points, comment);
    });
  }
  std::cout << "report: tables and plots -> " << dir.string() << '\n';
}

int Run(int argc, char** argv) {
  CLI::App app{"CDO adherence classification with tree ensembles, SHAP and fuzzy rules"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> positive_class;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out-dir", out_dir, "directory for all stage outputs");
  app.add_option("--positive-class", positive_class,
                 "positive class of high_vs_nothigh (1 = High, 0 = NotHigh)")
      ->check(CLI::Range(0, 1));
  app.add_option("--set", overrides, "override one config key (key=value)");

  std::string tracks_input;
  std::string weather_input;
  std::string model_choice = "best";
  auto* synth = app.add_subcommand("synth", "generate seeded synthetic arrivals");
  auto* ingest = app.add_subcommand("ingest", "parse track CSV and clip to the TMA");
  ingest->add_option("--tracks", tracks_input, "track CSV (default: synth output)");
  auto* features = app.add_subcommand("features", "build the 29-feature dataset");
  features->add_option("--weather", weather_input, "weather CSV (default: synth output)");
  auto* train = app.add_subcommand("train", "cross-validate both ensembles on every scenario");
  auto* explain = app.add_subcommand("explain", "SHAP importance and separability");
  explain->add_option("--model", model_choice, "best, RF or GB")
      ->check(CLI::IsMember({"best", "RF", "GB"}));
  auto* fexai = app.add_subcommand("fexai", "fuzzy rule classifier on the top three features");
  auto* report = app.add_subcommand("report", "assemble tables and plots");
  auto* all = app.add_subcommand("all", "run synth through report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Context ctx;
    if (!config_path.empty()) ApplyConfigFile(config_path, ctx.config);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << o << "'\n";
        return 1;
      }
      ctx.config.Set(csv::Trim(o.substr(0, eq)), csv::Trim(o.substr(eq + 1)));
    }
    if (seed) ctx.config.seed = *seed;
    if (!out_dir.empty()) ctx.config.out_dir = out_dir;
    if (positive_class) ctx.config.high_positive_class = *positive_class;
    ctx.config.Validate();
    ctx.out = ctx.config.out_dir;
    fs::create_directories(ctx.out);

    if (synth->parsed() || all->parsed()) Synth(ctx);
    if (ingest->parsed() || all->parsed()) Ingest(ctx, tracks_input);
    if (features->parsed() || all->parsed()) Features(ctx, weather_input);
    if (train->parsed() || all->parsed()) Train(ctx);
    if (explain->parsed() || all->parsed()) Explain(ctx, model_choice);
    if (fexai->parsed() || all->parsed()) Fexai(ctx);
    if (report->parsed() || all->parsed()) Report(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kConfig ? 1 : 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace cdoxai

int main(int argc, char** argv) { return cdoxai::Run(argc, argv); }
