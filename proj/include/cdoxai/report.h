#ifndef CDOXAI_REPORT_H_
#define CDOXAI_REPORT_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cdoxai/config.h"
#include "cdoxai/pipeline.h"

namespace cdoxai {

// Two comment lines (without the leading '#') naming the stage, config hash
// and seed of an output.
std::vector<std::string> Provenance(const PipelineConfig& config,
                                    std::string_view stage);
void WriteComments(std::ostream& out, const std::vector<std::string>& comments);

// Classifier metrics. An empty scenario drops the scenario column, which is
// the layout of the top-feature comparison table.
struct MetricsRow {
  std::string scenario;
  std::string classifier;
  Metrics metrics;
};

void WriteMetricsCsv(std::ostream& out, std::span<const MetricsRow> rows,
                     bool with_scenario, const std::vector<std::string>& comments);
// Accepts either layout. Throws kMissingColumn, kMalformedRow, kEmptyFile.
std::vector<MetricsRow> ReadMetricsCsv(std::istream& in);

struct SeparabilityRow {
  std::string scenario;
  WdReport wd;
};

// scenario,mean_wd,top5_mean_wd,count_wd_gt_0.5
void WriteSeparabilityCsv(std::ostream& out, std::span<const SeparabilityRow> rows,
                          const std::vector<std::string>& comments);

// One row per (sample, feature, class).
void WriteShapCsv(std::ostream& out, std::span<const ShapMatrix> folds,
                  const std::vector<std::string>& comments);

// feature value and attribution toward the positive class, per test sample.
void WriteDependenceCsv(std::ostream& out, std::span<const ShapMatrix> folds,
                        std::string_view feature, int positive_class,
                        const std::vector<std::string>& comments);
std::vector<std::pair<double, double>> ReadDependenceCsv(std::istream& in);

nlohmann::json MetricsToJson(const Metrics& m);
Metrics MetricsFromJson(const nlohmann::json& j);

nlohmann::json ExplanationToJson(const Explanation& e);
Explanation ExplanationFromJson(const nlohmann::json& j);

}  // namespace cdoxai

#endif  // CDOXAI_REPORT_H_
