#include "cdoxai/fexai.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cdoxai/csv.h"
#include "cdoxai/error.h"

namespace cdoxai {

namespace {

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

constexpr std::string_view kLowText = "Low";
constexpr std::string_view kNotLowText = "Not Low";

}  // namespace

void MembershipFunction::Validate() const {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper)) {
    throw Error(ErrorCode::kConfig,
                feature + ": membership crossings must be finite and ordered");
  }
  if (!(shoulder > 0.0 && shoulder <= 0.5)) {
    throw Error(ErrorCode::kConfig, feature + ": shoulder must be in (0, 0.5]");
  }
}

std::array<double, 3> MembershipFunction::Degrees(double value) const {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kNonFiniteValue,
                feature + " value is not finite");
  }
  const double w = shoulder * (upper - lower);
  const double rise_lower = Clamp01(0.5 + (value - lower) / (2.0 * w));
  const double rise_upper = Clamp01(0.5 + (value - upper) / (2.0 * w));
  return {1.0 - rise_lower, std::min(rise_lower, 1.0 - rise_upper), rise_upper};
}

int MembershipFunction::WinnerTakeAll(double value) const {
  const auto d = Degrees(value);
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (d[i] >= d[best]) best = i;
  }
  return best;
}

int MembershipFunction::SetIndex(std::string_view name) const {
  for (int i = 0; i < 3; ++i) {
    if (set_names[i] == name) return i;
  }
  return -1;
}

FuzzyPartition FuzzyPartition::Default(double shoulder) {
  FuzzyPartition p;
  p.features[0] = {"MDRate", {"Low", "Medium", "High"}, 0.026, 0.044, shoulder};
  p.features[1] = {"FltSegments", {"Few", "Moderate", "Many"}, 238.0, 767.0,
                   shoulder};
  p.features[2] = {"MDirection", {"Straight", "Moderate", "Complex"}, 1.375,
                   2.125, shoulder};
  for (const auto& mf : p.features) mf.Validate();
  return p;
}

Antecedent Fuzzify(const FuzzyPartition& partition, const RuleInput& input) {
  Antecedent a;
  for (int i = 0; i < 3; ++i) a[i] = partition.features[i].WinnerTakeAll(input[i]);
  return a;
}

const FuzzyRule* RuleBase::Find(const Antecedent& antecedent) const {
  auto it = std::lower_bound(
      rules.begin(), rules.end(), antecedent,
      [](const FuzzyRule& r, const Antecedent& a) { return r.antecedent < a; });
  if (it == rules.end() || it->antecedent != antecedent) return nullptr;
  return &*it;
}

RuleBase ExtractRules(const FuzzyPartition& partition,
                      std::span<const RuleInput> inputs,
                      std::span<const int> labels) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyTraining, "no training rows");
  if (inputs.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "inputs and labels differ in length");
  }
  std::map<Antecedent, std::array<int, 2>> votes;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (labels[i] != kRuleLow && labels[i] != kRuleNotLow) {
      throw Error(ErrorCode::kUnknownLabel,
                  "rule label must be 0 (Low) or 1 (NotLow), got " +
                      std::to_string(labels[i]));
    }
    ++votes[Fuzzify(partition, inputs[i])][labels[i]];
  }
  RuleBase base;
  for (const auto& [antecedent, count] : votes) {
    const int consequent =
        count[kRuleNotLow] > count[kRuleLow] ? kRuleNotLow : kRuleLow;
    base.rules.push_back({antecedent, consequent, count[0] + count[1]});
  }
  return base;
}

double Infer(const RuleBase& rules, const FuzzyPartition& partition,
             const RuleInput& input) {
  if (rules.rules.empty()) throw Error(ErrorCode::kEmptyRuleBase, "rule base is empty");
  if (const FuzzyRule* hit = rules.Find(Fuzzify(partition, input))) {
    return hit->consequent == kRuleNotLow ? 1.0 : 0.0;
  }
  std::array<std::array<double, 3>, 3> degrees;
  for (int i = 0; i < 3; ++i) degrees[i] = partition.features[i].Degrees(input[i]);
  const FuzzyRule* best = nullptr;
  double best_activation = -1.0;
  for (const FuzzyRule& rule : rules.rules) {
    double activation = 1.0;
    for (int i = 0; i < 3; ++i) activation *= degrees[i][rule.antecedent[i]];
    if (activation > best_activation) {
      best_activation = activation;
      best = &rule;
    }
  }
  return best->consequent == kRuleNotLow ? 1.0 : 0.0;
}

int Defuzzify(double activation) {
  if (!(activation >= 0.0 && activation <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "activation outside [0, 1]");
  }
  return activation >= 0.5 ? kRuleNotLow : kRuleLow;
}

std::string FormatRule(const FuzzyRule& rule, const FuzzyPartition& partition,
                       bool with_support) {
  std::string s = "IF";
  for (int i = 0; i < 3; ++i) {
    if (i > 0) s += " AND";
    const MembershipFunction& mf = partition.features[i];
    s += " " + mf.feature + " IS " + mf.set_names[rule.antecedent[i]];
  }
  s += " THEN CDOCAT IS ";
  s += rule.consequent == kRuleNotLow ? kNotLowText : kLowText;
  if (with_support) s += " # support=" + std::to_string(rule.support);
  return s;
}

std::string FormatRuleBase(const RuleBase& rules,
                           const FuzzyPartition& partition, bool with_support) {
  std::string out;
  for (const FuzzyRule& rule : rules.rules) {
    out += FormatRule(rule, partition, with_support);
    out += '\n';
  }
  return out;
}

namespace {

FuzzyRule ParseRule(std::string_view text, const FuzzyPartition& partition,
                    std::size_t line) {
  auto fail = [&](const std::string& why) -> FuzzyRule {
    throw Error(ErrorCode::kRuleSyntax, why, line);
  };
  FuzzyRule rule;
  const auto hash = text.find('#');
  if (hash != std::string_view::npos) {
    const std::string comment = csv::Trim(text.substr(hash + 1));
    text = text.substr(0, hash);
    constexpr std::string_view kKey = "support=";
    if (!comment.starts_with(kKey)) return fail("unrecognized rule comment");
    const auto support = csv::ParseInt(comment.substr(kKey.size()));
    if (!support || *support < 1) return fail("support must be a positive integer");
    rule.support = static_cast<int>(*support);
  }

  std::istringstream in{std::string(text)};
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  // IF f IS s AND f IS s AND f IS s THEN CDOCAT IS <class...>
  if (tok.size() < 16 || tok[0] != "IF" || tok[4] != "AND" || tok[8] != "AND" ||
      tok[12] != "THEN" || tok[13] != "CDOCAT" || tok[14] != "IS") {
    return fail("expected 'IF <f> IS <set> AND ... THEN CDOCAT IS <class>'");
  }
  for (int i = 0; i < 3; ++i) {
    const MembershipFunction& mf = partition.features[i];
    if (tok[1 + 4 * i] != mf.feature || tok[2 + 4 * i] != "IS") {
      return fail("expected feature " + mf.feature);
    }
    const int set = mf.SetIndex(tok[3 + 4 * i]);
    if (set < 0) return fail("unknown fuzzy set '" + tok[3 + 4 * i] + "' for " + mf.feature);
    rule.antecedent[i] = set;
  }
  if (tok.size() == 16 && tok[15] == kLowText) {
    rule.consequent = kRuleLow;
  } else if (tok.size() == 17 && tok[15] == "Not" && tok[16] == "Low") {
    rule.consequent = kRuleNotLow;
  } else {
    return fail("consequent must be 'Low' or 'Not Low'");
  }
  return rule;
}

}  // namespace

RuleBase ParseRuleBase(std::istream& in, const FuzzyPartition& partition) {
  RuleBase base;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = csv::Trim(raw);
    if (text.empty() || text.front() == '#') continue;
    FuzzyRule rule = ParseRule(text, partition, line);
    auto it = std::lower_bound(
        base.rules.begin(), base.rules.end(), rule,
        [](const FuzzyRule& a, const FuzzyRule& b) { return a.antecedent < b.antecedent; });
    if (it != base.rules.end() && it->antecedent == rule.antecedent) {
      throw Error(ErrorCode::kRuleSyntax, "duplicate antecedent", line);
    }
    base.rules.insert(it, rule);
  }
  return base;
}

RuleBase ParseRuleBase(const std::filesystem::path& path,
                       const FuzzyPartition& partition) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ParseRuleBase(in, partition);
}

std::vector<RuleInput> RuleInputs(const Dataset& dataset) {
  std::array<std::size_t, 3> cols;
  for (int i = 0; i < 3; ++i) {
    cols[i] = dataset.FeatureIndex(std::string(kFexaiFeatures[i]));
  }
  std::vector<RuleInput> inputs(dataset.size());
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (int i = 0; i < 3; ++i) inputs[r][i] = dataset.features(r, cols[i]);
  }
  return inputs;
}

FexaiRun EvaluateFexai(const FuzzyPartition& partition,
                       std::span<const RuleInput> inputs,
                       std::span<const int> labels, int k, std::uint64_t seed) {
  if (inputs.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "inputs and labels differ in length");
  }
  FexaiRun run;
  run.folds = StratifiedKFold(labels, k, seed);
  std::map<Antecedent, std::array<int, 2>> support;
  for (std::size_t f = 0; f < run.folds.k(); ++f) {
    const auto train = run.folds.Train(f, inputs.size());
    std::vector<RuleInput> x;
    std::vector<int> y;
    for (std::size_t i : train) {
      x.push_back(inputs[i]);
      y.push_back(labels[i]);
    }
    RuleBase rules = ExtractRules(partition, x, y);
    for (const FuzzyRule& r : rules.rules) {
      support[r.antecedent][r.consequent] += r.support;
    }

    std::vector<int> predicted;
    std::vector<int> truth;
    for (std::size_t i : run.folds.test[f]) {
      predicted.push_back(Defuzzify(Infer(rules, partition, inputs[i])));
      truth.push_back(labels[i]);
    }
    run.report.folds.push_back(Evaluate(predicted, truth, 2, kRuleNotLow));
    run.predicted.push_back(std::move(predicted));
    run.fold_rules.push_back(std::move(rules));
  }
  run.report.mean = MeanMetrics(run.report.folds);
  for (const auto& [antecedent, s] : support) {
    const int consequent = s[kRuleNotLow] > s[kRuleLow] ? kRuleNotLow : kRuleLow;
    run.rules.rules.push_back({antecedent, consequent, s[consequent]});
  }
  return run;
}

}  // namespace cdoxai
