#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cdoxai/fexai.h"
#include "test_util.h"

namespace cdoxai {
namespace {

const FuzzyPartition kPartition = FuzzyPartition::Default();
const MembershipFunction& kMdRate = kPartition.features[0];
const MembershipFunction& kSegments = kPartition.features[1];
const MembershipFunction& kDirection = kPartition.features[2];

constexpr char kReference[] =
    "IF MDRate IS Low AND FltSegments IS Moderate AND MDirection IS Straight THEN CDOCAT IS Low\n"
    "IF MDRate IS Low AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Low\n"
    "IF MDRate IS Low AND FltSegments IS Many AND MDirection IS Straight THEN CDOCAT IS Low\n"
    "IF MDRate IS Medium AND FltSegments IS Few AND MDirection IS Moderate THEN CDOCAT IS Not Low\n"
    "IF MDRate IS Medium AND FltSegments IS Few AND MDirection IS Complex THEN CDOCAT IS Not Low\n"
    "IF MDRate IS Medium AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Not Low\n"
    "IF MDRate IS High AND FltSegments IS Few AND MDirection IS Moderate THEN CDOCAT IS Not Low\n"
    "IF MDRate IS High AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Not Low\n"
    "IF MDRate IS High AND FltSegments IS Few AND MDirection IS Complex THEN CDOCAT IS Not Low\n"
    "IF MDRate IS Low AND FltSegments IS Few AND MDirection IS Moderate THEN CDOCAT IS Not Low\n"
    "IF MDRate IS Low AND FltSegments IS Few AND MDirection IS Complex THEN CDOCAT IS Not Low\n"
    "IF MDRate IS Low AND FltSegments IS Moderate AND MDirection IS Moderate THEN CDOCAT IS Low\n"
    "IF MDRate IS Low AND FltSegments IS Many AND MDirection IS Complex THEN CDOCAT IS Low\n"
    "IF MDRate IS Low AND FltSegments IS Moderate AND MDirection IS Complex THEN CDOCAT IS Low\n";

RuleBase Reference() {
  std::istringstream in(kReference);
  return ParseRuleBase(in, kPartition);
}

TEST(Membership, CrossingsAreHalf) {
  const auto d = kMdRate.Degrees(0.026);
  EXPECT_DOUBLE_EQ(d[0], 0.5);
  EXPECT_DOUBLE_EQ(d[1], 0.5);
  EXPECT_EQ(d[2], 0.0);
  EXPECT_EQ(kMdRate.WinnerTakeAll(0.026), 1);  // ties go up
  const auto e = kSegments.Degrees(767);
  EXPECT_DOUBLE_EQ(e[1], 0.5);
  EXPECT_DOUBLE_EQ(e[2], 0.5);
}

TEST(Membership, PlateausAndWinners) {
  EXPECT_EQ(kMdRate.Degrees(0.001), (std::array<double, 3>{1, 0, 0}));
  EXPECT_EQ(kMdRate.WinnerTakeAll(0.02), 0);
  EXPECT_EQ(kMdRate.WinnerTakeAll(0.035), 1);
  EXPECT_EQ(kMdRate.WinnerTakeAll(0.07), 2);
  EXPECT_EQ(kSegments.Degrees(500), (std::array<double, 3>{0, 1, 0}));
  EXPECT_EQ(kSegments.WinnerTakeAll(500), 1);
  EXPECT_EQ(kSegments.WinnerTakeAll(800), 2);
  EXPECT_EQ(kSegments.WinnerTakeAll(100), 0);
  EXPECT_EQ(kDirection.WinnerTakeAll(1.375), 1);
  EXPECT_EQ(kDirection.WinnerTakeAll(1.0), 0);
  EXPECT_EQ(kDirection.WinnerTakeAll(3.0), 2);
}

TEST(Membership, DegreesSumToOneAndStayInRange) {
  std::mt19937_64 gen(3);
  for (const auto& mf : kPartition.features) {
    const double span = mf.upper - mf.lower;
    std::uniform_real_distribution<double> u(mf.lower - span, mf.upper + span);
    for (int i = 0; i < 2000; ++i) {
      const auto d = mf.Degrees(u(gen));
      EXPECT_NEAR(d[0] + d[1] + d[2], 1.0, 1e-12);
      for (double v : d) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(Membership, WinnerMatchesIntervalTableOnDenseGrid) {
  for (const auto& mf : kPartition.features) {
    const double lo = mf.lower - (mf.upper - mf.lower);
    const double hi = mf.upper + (mf.upper - mf.lower);
    for (int i = 0; i < 5000; ++i) {
      const double v = lo + (hi - lo) * (i + 0.5) / 5000;
      const int expected = v < mf.lower ? 0 : (v < mf.upper ? 1 : 2);
      EXPECT_EQ(mf.WinnerTakeAll(v), expected) << mf.feature << " " << v;
    }
  }
}

TEST(Membership, Errors) {
  EXPECT_EQ(CodeOf([] { kMdRate.Degrees(std::nan("")); }), ErrorCode::kNonFiniteValue);
  MembershipFunction bad = kMdRate;
  bad.lower = bad.upper;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kConfig);
  bad = kMdRate;
  bad.shoulder = 0.6;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kConfig);
  EXPECT_EQ(kMdRate.SetIndex("Medium"), 1);
  EXPECT_EQ(kMdRate.SetIndex("Few"), -1);
}

TEST(ExtractRules, MajorityVoteAndSupport) {
  const RuleInput a{0.01, 500, 1.0};  // Low, Moderate, Straight
  const RuleInput b{0.05, 100, 1.0};  // High, Few, Straight
  const std::vector<RuleInput> inputs{a, a, a, b, b};
  const std::vector<int> labels{kRuleLow, kRuleLow, kRuleNotLow, kRuleLow, kRuleNotLow};
  const RuleBase rb = ExtractRules(kPartition, inputs, labels);
  ASSERT_EQ(rb.rules.size(), 2u);
  const FuzzyRule* ra = rb.Find({0, 1, 0});
  ASSERT_NE(ra, nullptr);
  EXPECT_EQ(ra->consequent, kRuleLow);
  EXPECT_EQ(ra->support, 3);
  const FuzzyRule* r2 = rb.Find({2, 0, 0});
  ASSERT_NE(r2, nullptr);
  EXPECT_EQ(r2->consequent, kRuleLow);  // 1-1 tie
  EXPECT_EQ(rb.Find({1, 1, 1}), nullptr);
}

TEST(ExtractRules, OrderIndependent) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> rate(0.0, 0.07), seg(50, 1000), dir(0.2, 3.0);
  std::vector<RuleInput> inputs;
  std::vector<int> labels;
  for (int i = 0; i < 300; ++i) {
    inputs.push_back({rate(gen), seg(gen), dir(gen)});
    labels.push_back(static_cast<int>(gen() % 2));
  }
  const RuleBase forward = ExtractRules(kPartition, inputs, labels);
  std::vector<std::size_t> order(inputs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), gen);
  std::vector<RuleInput> shuffled_inputs;
  std::vector<int> shuffled_labels;
  for (std::size_t i : order) {
    shuffled_inputs.push_back(inputs[i]);
    shuffled_labels.push_back(labels[i]);
  }
  EXPECT_EQ(ExtractRules(kPartition, shuffled_inputs, shuffled_labels), forward);
}

TEST(ExtractRules, Errors) {
  const std::vector<RuleInput> one{{0.01, 100, 1}};
  EXPECT_EQ(CodeOf([] { ExtractRules(kPartition, {}, {}); }), ErrorCode::kEmptyTraining);
  EXPECT_EQ(CodeOf([&] { ExtractRules(kPartition, one, std::vector<int>{}); }),
            ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([&] { ExtractRules(kPartition, one, std::vector<int>{2}); }),
            ErrorCode::kUnknownLabel);
}

TEST(Infer, ReferenceRules) {
  const RuleBase rb = Reference();
  ASSERT_EQ(rb.rules.size(), 14u);
  EXPECT_EQ(Defuzzify(Infer(rb, kPartition, {0.06, 100, 1.0})), kRuleNotLow);
  EXPECT_EQ(Defuzzify(Infer(rb, kPartition, {0.01, 900, 1.0})), kRuleLow);
  EXPECT_EQ(Defuzzify(Infer(rb, kPartition, {0.01, 500, 2.5})), kRuleLow);
  EXPECT_EQ(Defuzzify(Infer(rb, kPartition, {0.01, 100, 1.8})), kRuleNotLow);
}

TEST(Infer, UnmatchedFallsBackToStrongestRule) {
  RuleBase single;
  single.rules = {{{0, 1, 0}, kRuleNotLow, 1}};
  EXPECT_EQ(Infer(single, kPartition, {0.06, 900, 3.0}), 1.0);

  RuleBase two;
  two.rules = {{{0, 0, 0}, kRuleNotLow, 1}, {{2, 2, 2}, kRuleLow, 1}};
  // (Medium, Moderate, Moderate) close to the High/Many/Complex corner.
  EXPECT_EQ(Infer(two, kPartition, {0.043, 760, 2.1}), 0.0);
  EXPECT_EQ(Infer(two, kPartition, {0.027, 240, 1.38}), 1.0);
  EXPECT_EQ(CodeOf([] { Infer(RuleBase{}, kPartition, {0, 0, 0}); }),
            ErrorCode::kEmptyRuleBase);
}

TEST(Defuzzify, Threshold) {
  EXPECT_EQ(Defuzzify(0.5), kRuleNotLow);
  EXPECT_EQ(Defuzzify(0.4999), kRuleLow);
  EXPECT_EQ(Defuzzify(0.0), kRuleLow);
  EXPECT_EQ(Defuzzify(1.0), kRuleNotLow);
  EXPECT_EQ(CodeOf([] { Defuzzify(1.5); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(CodeOf([] { Defuzzify(-0.1); }), ErrorCode::kOutOfRange);
}

TEST(RuleText, FormatMatchesReferenceSyntax) {
  const FuzzyRule r{{1, 0, 2}, kRuleNotLow, 4};
  EXPECT_EQ(FormatRule(r, kPartition, false),
            "IF MDRate IS Medium AND FltSegments IS Few AND MDirection IS Complex "
            "THEN CDOCAT IS Not Low");
  EXPECT_EQ(FormatRule(r, kPartition, true),
            "IF MDRate IS Medium AND FltSegments IS Few AND MDirection IS Complex "
            "THEN CDOCAT IS Not Low # support=4");
}

TEST(RuleText, RoundTrip) {
  const RuleBase rb = Reference();
  for (bool with_support : {false, true}) {
    std::istringstream in(FormatRuleBase(rb, kPartition, with_support));
    EXPECT_EQ(ParseRuleBase(in, kPartition), rb);
  }
  RuleBase supported = rb;
  for (std::size_t i = 0; i < supported.rules.size(); ++i) supported.rules[i].support = 3 + int(i);
  std::istringstream in(FormatRuleBase(supported, kPartition, true));
  EXPECT_EQ(ParseRuleBase(in, kPartition), supported);
}

TEST(RuleText, CommentsAndBlankLinesSkipped) {
  std::istringstream in(
      "# header\n\n"
      "IF MDRate IS High AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Not Low\n"
      "   \n");
  const RuleBase rb = ParseRuleBase(in, kPartition);
  ASSERT_EQ(rb.rules.size(), 1u);
  EXPECT_EQ(rb.rules[0], (FuzzyRule{{2, 0, 0}, kRuleNotLow, 1}));
}

TEST(RuleText, SyntaxErrorsReportLine) {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"IF MDRate IS Huge AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Low\n", 1},
      {"# c\nIF MDRate IS Low AND FltSegments IS Few THEN CDOCAT IS Low\n", 2},
      {"IF MDRate IS Low AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS High\n", 1},
      {"IF MDRate IS Low AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Low\n"
       "IF MDRate IS Low AND FltSegments IS Few AND MDirection IS Straight THEN CDOCAT IS Not Low\n",
       2},
  };
  for (const auto& [text, expected_line] : cases) {
    std::istringstream in(text);
    std::size_t line = 0;
    EXPECT_EQ(CodeOf([&] { ParseRuleBase(in, kPartition); }, &line), ErrorCode::kRuleSyntax)
        << text;
    EXPECT_EQ(line, expected_line) << text;
  }
}

TEST(EvaluateFexai, SeparableCellsScorePerfectly) {
  const RuleBase rb = Reference();
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::array<std::array<double, 3>, 3> centers = {
      std::array<double, 3>{0.015, 0.035, 0.055},
      std::array<double, 3>{150, 500, 850},
      std::array<double, 3>{1.0, 1.75, 2.5}};
  std::vector<RuleInput> inputs;
  std::vector<int> labels;
  for (int i = 0; i < 280; ++i) {
    const FuzzyRule& r = rb.rules[i % rb.rules.size()];
    RuleInput in;
    for (int f = 0; f < 3; ++f) in[f] = centers[f][r.antecedent[f]] * (0.98 + 0.04 * u(gen));
    inputs.push_back(in);
    labels.push_back(r.consequent);
  }
  const FexaiRun run = EvaluateFexai(kPartition, inputs, labels, 5, 1);
  EXPECT_EQ(run.report.mean.accuracy, 1.0);
  ASSERT_EQ(run.rules.rules.size(), rb.rules.size());
  for (std::size_t i = 0; i < rb.rules.size(); ++i) {
    EXPECT_EQ(run.rules.rules[i].antecedent, rb.rules[i].antecedent);
    EXPECT_EQ(run.rules.rules[i].consequent, rb.rules[i].consequent);
    EXPECT_EQ(run.rules.rules[i].support, 80);  // 20 per cell, each in 4 training folds
  }
}

}  // namespace
}  // namespace cdoxai
