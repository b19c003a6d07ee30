#ifndef CDOXAI_FEXAI_H_
#define CDOXAI_FEXAI_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdoxai/cv.h"
#include "cdoxai/dataset.h"

namespace cdoxai {

// The three rule inputs, in antecedent order.
inline constexpr std::array<std::string_view, 3> kFexaiFeatures = {
    "MDRate", "FltSegments", "MDirection"};

// Rule consequents share the Low-vs-NotLow scenario labels.
inline constexpr int kRuleLow = 0;
inline constexpr int kRuleNotLow = 1;

// Three fuzzy sets over one feature. Adjacent sets cross at degree 0.5
// exactly at `lower` and `upper`; each crossing is a linear ramp of
// half-width shoulder * (upper - lower), so neighbouring degrees sum to 1.
struct MembershipFunction {
  std::string feature;
  std::array<std::string, 3> set_names;
  double lower = 0.0;
  double upper = 1.0;
  double shoulder = 0.25;  // in (0, 0.5]

  // Throws kNonFiniteValue.
  std::array<double, 3> Degrees(double value) const;
  // Index of the maximal set; ties go to the upper set.
  int WinnerTakeAll(double value) const;
  int SetIndex(std::string_view name) const;  // -1 when unknown
  // Throws kConfig unless lower < upper and shoulder is in (0, 0.5].
  void Validate() const;
};

struct FuzzyPartition {
  std::array<MembershipFunction, 3> features;

  // MDRate 0.026/0.044, FltSegments 238/767, MDirection 1.375/2.125.
  static FuzzyPartition Default(double shoulder = 0.25);
};

using Antecedent = std::array<int, 3>;  // set index per feature
using RuleInput = std::array<double, 3>;

Antecedent Fuzzify(const FuzzyPartition& partition, const RuleInput& input);

struct FuzzyRule {
  Antecedent antecedent{};
  int consequent = kRuleLow;
  int support = 1;
  friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

// Rules are kept sorted by antecedent with no duplicates.
struct RuleBase {
  std::vector<FuzzyRule> rules;

  const FuzzyRule* Find(const Antecedent& antecedent) const;
  friend bool operator==(const RuleBase&, const RuleBase&) = default;
};

// Majority vote per antecedent, ties to Low. Throws kEmptyTraining,
// kLengthMismatch, kUnknownLabel.
RuleBase ExtractRules(const FuzzyPartition& partition,
                      std::span<const RuleInput> inputs,
                      std::span<const int> labels);

// 1 for a matched NotLow rule, 0 for Low. An unmatched antecedent takes the
// rule with the largest product of membership degrees (first on ties).
// Throws kEmptyRuleBase.
double Infer(const RuleBase& rules, const FuzzyPartition& partition,
             const RuleInput& input);

// >= 0.5 is NotLow. Throws kOutOfRange outside [0, 1].
int Defuzzify(double activation);

std::string FormatRule(const FuzzyRule& rule, const FuzzyPartition& partition,
                       bool with_support);
std::string FormatRuleBase(const RuleBase& rules,
                           const FuzzyPartition& partition, bool with_support);

// One rule per line; blank and '#' lines are skipped, a trailing
// "# support=N" sets the support (default 1). Throws kRuleSyntax with the
// line number, also for duplicate antecedents.
RuleBase ParseRuleBase(std::istream& in, const FuzzyPartition& partition);
RuleBase ParseRuleBase(const std::filesystem::path& path,
                       const FuzzyPartition& partition);

// Columns MDRate, FltSegments, MDirection of every row.
std::vector<RuleInput> RuleInputs(const Dataset& dataset);

struct FexaiRun {
  Folds folds;
  std::vector<RuleBase> fold_rules;
  std::vector<std::vector<int>> predicted;  // per fold, aligned with test
  CvReport report;
  RuleBase rules;  // union over folds
};

// Stratified k-fold evaluation on binary Low(0)/NotLow(1) labels. The union
// rule base keeps, per antecedent, the consequent with the larger total
// support (Low on ties).
FexaiRun EvaluateFexai(const FuzzyPartition& partition,
                       std::span<const RuleInput> inputs,
                       std::span<const int> labels, int k, std::uint64_t seed);

}  // namespace cdoxai

#endif  // CDOXAI_FEXAI_H_
