#include "cdoxai/report.h"

#include <ostream>

#include "cdoxai/csv.h"
#include "cdoxai/error.h"

namespace cdoxai {

namespace {

constexpr std::string_view kMetricColumns[] = {"acc", "pr", "recall", "f1"};

std::string Fmt(double v) { return csv::FormatDouble(v); }

double ParseField(std::string_view text, std::size_t line) {
  const auto v = csv::ParseDouble(text);
  if (!v) {
    throw Error(ErrorCode::kMalformedRow, "bad number '" + std::string(text) + "'", line);
  }
  return *v;
}

std::vector<double> WdList(const nlohmann::json& j) {
  return j.get<std::vector<double>>();
}

}  // namespace

std::vector<std::string> Provenance(const PipelineConfig& config,
                                    std::string_view stage) {
  return {"cdoxai " + std::string(stage),
          "config_hash=" + config.Hash() + " seed=" + std::to_string(config.seed)};
}

void WriteComments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

void WriteMetricsCsv(std::ostream& out, std::span<const MetricsRow> rows,
                     bool with_scenario, const std::vector<std::string>& comments) {
  WriteComments(out, comments);
  if (with_scenario) out << "scenario,";
  out << "classifier";
  for (auto c : kMetricColumns) out << ',' << c;
  out << '\n';
  for (const MetricsRow& r : rows) {
    if (with_scenario) out << r.scenario << ',';
    const Metrics& m = r.metrics;
    out << r.classifier << ',' << Fmt(m.accuracy) << ',' << Fmt(m.precision) << ','
        << Fmt(m.recall) << ',' << Fmt(m.f1) << '\n';
  }
}

std::vector<MetricsRow> ReadMetricsCsv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::NextDataLine(in, line, line_number)) {
    throw Error(ErrorCode::kEmptyFile, "metrics table is empty");
  }
  std::string header_text = line;
  const auto header = csv::SplitLine(header_text);
  const auto scenario = csv::FindColumn(header, "scenario");
  const auto classifier = csv::FindColumn(header, "classifier");
  if (!classifier) throw Error(ErrorCode::kMissingColumn, "missing column 'classifier'");
  std::array<std::size_t, 4> metric{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = csv::FindColumn(header, kMetricColumns[i]);
    if (!c) {
      throw Error(ErrorCode::kMissingColumn,
                  "missing column '" + std::string(kMetricColumns[i]) + "'");
    }
    metric[i] = *c;
  }
  std::vector<MetricsRow> rows;
  while (csv::NextDataLine(in, line, line_number)) {
    const auto f = csv::SplitLine(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRow, "wrong field count", line_number);
    }
    MetricsRow r;
    if (scenario) r.scenario = std::string(f[*scenario]);
    r.classifier = std::string(f[*classifier]);
    r.metrics.accuracy = ParseField(f[metric[0]], line_number);
    r.metrics.precision = ParseField(f[metric[1]], line_number);
    r.metrics.recall = ParseField(f[metric[2]], line_number);
    r.metrics.f1 = ParseField(f[metric[3]], line_number);
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteSeparabilityCsv(std::ostream& out, std::span<const SeparabilityRow> rows,
                          const std::vector<std::string>& comments) {
  WriteComments(out, comments);
  out << "scenario,mean_wd,top5_mean_wd,count_wd_gt_0.5\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << Fmt(r.wd.mean_wd) << ',' << Fmt(r.wd.top5_mean_wd)
        << ',' << r.wd.count_above << '\n';
  }
}

void WriteShapCsv(std::ostream& out, std::span<const ShapMatrix> folds,
                  const std::vector<std::string>& comments) {
  WriteComments(out, comments);
  out << "sample_id,feature,class,shap_value\n";
  for (const ShapMatrix& s : folds) {
    for (std::size_t i = 0; i < s.n_samples; ++i) {
      const std::size_t id = s.sample_ids.empty() ? i : s.sample_ids[i];
      for (std::size_t f = 0; f < s.n_features; ++f) {
        for (int k = 0; k < s.n_classes; ++k) {
          out << id << ',' << s.feature_names[f] << ',' << k << ',' << Fmt(s.at(i, f, k))
              << '\n';
        }
      }
    }
  }
}

void WriteDependenceCsv(std::ostream& out, std::span<const ShapMatrix> folds,
                        std::string_view feature, int positive_class,
                        const std::vector<std::string>& comments) {
  WriteComments(out, comments);
  out << "value,shap_value\n";
  for (const auto& [value, phi] : ClassSpecificShap(folds, feature, positive_class)) {
    out << Fmt(value) << ',' << Fmt(phi) << '\n';
  }
}

std::vector<std::pair<double, double>> ReadDependenceCsv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::NextDataLine(in, line, line_number)) {
    throw Error(ErrorCode::kEmptyFile, "dependence table is empty");
  }
  std::vector<std::pair<double, double>> out;
  while (csv::NextDataLine(in, line, line_number)) {
    const auto f = csv::SplitLine(line);
    if (f.size() != 2) throw Error(ErrorCode::kMalformedRow, "wrong field count", line_number);
    out.emplace_back(ParseField(f[0], line_number), ParseField(f[1], line_number));
  }
  return out;
}

nlohmann::json MetricsToJson(const Metrics& m) {
  return {{"acc", m.accuracy}, {"pr", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

Metrics MetricsFromJson(const nlohmann::json& j) {
  return {j.at("acc").get<double>(), j.at("pr").get<double>(),
          j.at("recall").get<double>(), j.at("f1").get<double>()};
}

nlohmann::json ExplanationToJson(const Explanation& e) {
  nlohmann::json j;
  j["scenario"] = std::string(ScenarioIdName(e.scenario));
  j["model"] = std::string(EnsembleKindName(e.kind));
  j["space"] = std::string(AttributionSpaceName(e.space));
  j["positive_class"] = e.positive_class;
  j["feature_names"] = e.importance.feature_names;
  j["importance"] = e.importance.scores;
  j["ranking"] = e.importance.ranking;
  if (e.wd) {
    j["wd"] = {{"per_feature", e.wd->wd},
               {"mean_wd", e.wd->mean_wd},
               {"top5_mean_wd", e.wd->top5_mean_wd},
               {"count_above", e.wd->count_above},
               {"threshold", e.wd->threshold}};
  }
  return j;
}

Explanation ExplanationFromJson(const nlohmann::json& j) {
  try {
    Explanation e;
    e.scenario = ParseScenarioId(j.at("scenario").get<std::string>());
    e.kind = ParseEnsembleKind(j.at("model").get<std::string>());
    e.space = j.at("space").get<std::string>() == "log_odds" ? AttributionSpace::kLogOdds
                                                            : AttributionSpace::kProbability;
    e.positive_class = j.at("positive_class").get<int>();
    e.importance.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    e.importance.scores = j.at("importance").get<std::vector<double>>();
    e.importance.ranking = j.at("ranking").get<std::vector<std::size_t>>();
    if (j.contains("wd")) {
      const auto& w = j.at("wd");
      WdReport r;
      r.feature_names = e.importance.feature_names;
      r.wd = WdList(w.at("per_feature"));
      r.mean_wd = w.at("mean_wd").get<double>();
      r.top5_mean_wd = w.at("top5_mean_wd").get<double>();
      r.count_above = w.at("count_above").get<int>();
      r.threshold = w.at("threshold").get<double>();
      e.wd = std::move(r);
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kMalformedRow, std::string("explanation summary: ") + ex.what());
  }
}

}  // namespace cdoxai
