#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cdoxai/fexai.h"
#include "cdoxai/synth.h"
#include "test_util.h"

namespace cdoxai {
namespace {

SynthSpec Small(std::size_t n) {
  SynthSpec spec;
  spec.n_flights = n;
  spec.seed = 7;
  return spec;
}

TEST(GenerateTrack, Deterministic) {
  const SynthSpec spec = Small(3);
  const auto a = GenerateTrack(spec, 2);
  const auto b = GenerateTrack(spec, 2);
  EXPECT_EQ(a.track, b.track);
  EXPECT_EQ(a.truth.level_offs, b.truth.level_offs);
  EXPECT_NE(GenerateTrack(spec, 1).track, a.track);
  EXPECT_EQ(a.track.flight_id, "SYN000002");
}

TEST(GenerateTrack, NoLevelOffsGivesFullAdherence) {
  SynthSpec spec = Small(1);
  spec.fixed_level_offs = 0;
  const auto fleet = GenerateFleet(spec);
  ASSERT_EQ(fleet.dataset.size(), 1u);
  EXPECT_EQ(fleet.dataset.adherence[0], 1.0);
  EXPECT_EQ(fleet.dataset.labels[0], static_cast<int>(CdoCategory::kHigh));
}

TEST(GenerateTrack, InjectedLevelOffs) {
  SynthSpec spec = Small(1);
  spec.fixed_segments = 10;
  spec.fixed_level_offs = 4;
  spec.segments = {10, 10};
  const auto g = GenerateTrack(spec, 0);
  EXPECT_EQ(g.track.points.size(), 11u);
  EXPECT_EQ(g.truth.level_offs, 4);
  EXPECT_EQ(std::count(g.truth.compliant.begin(), g.truth.compliant.end(), false), 4);
  const auto fleet = GenerateFleet(spec);
  EXPECT_EQ(fleet.dataset.adherence[0], 0.6);
  EXPECT_EQ(fleet.dataset.labels[0], static_cast<int>(CdoCategory::kHigh));
}

TEST(GenerateFleet, AdherenceAndCategoryMatchTruth) {
  const auto fleet = GenerateFleet(Small(60));
  ASSERT_EQ(fleet.dataset.size(), 60u);
  const std::size_t segments = fleet.dataset.FeatureIndex("FltSegments");
  const std::size_t rate = fleet.dataset.FeatureIndex("MDRate");
  for (std::size_t i = 0; i < 60; ++i) {
    const TrackTruth& t = fleet.truth[i];
    EXPECT_EQ(fleet.dataset.adherence[i],
              static_cast<double>(t.n_segments - t.level_offs) / t.n_segments);
    EXPECT_EQ(fleet.dataset.labels[i], static_cast<int>(Cdocat(t.adherence)));
    EXPECT_EQ(fleet.dataset.features(i, segments), t.n_segments);
    EXPECT_NEAR(fleet.dataset.features(i, rate), t.gradient, 1e-9);
  }
}

TEST(GenerateFleet, EmptyFleet) {
  const auto fleet = GenerateFleet(Small(0));
  EXPECT_EQ(fleet.dataset.size(), 0u);
  EXPECT_TRUE(fleet.tracks.empty());
}

TEST(SynthSpec, InfeasibleSpecsRejected) {
  SynthSpec a = Small(1);
  a.fixed_segments = 5;
  a.fixed_level_offs = 6;
  EXPECT_EQ(CodeOf([&] { GenerateTrack(a, 0); }), ErrorCode::kInfeasibleSpec);
  SynthSpec b = Small(1);
  b.gradient = {0.05, 0.01};
  EXPECT_EQ(CodeOf([&] { b.Validate(); }), ErrorCode::kInfeasibleSpec);
  SynthSpec c = Small(1);
  c.mode = LabelMode::kRule;  // empty rule table
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kInfeasibleSpec);
  SynthSpec d = Small(1);
  d.fixed_level_offs = 2000;
  EXPECT_EQ(CodeOf([&] { GenerateTrack(d, 0); }), ErrorCode::kInfeasibleSpec);
}

TEST(LabelMode, Names) {
  EXPECT_EQ(ParseLabelMode(LabelModeName(LabelMode::kRule)), LabelMode::kRule);
  EXPECT_EQ(ParseLabelMode("geometric"), LabelMode::kGeometric);
  EXPECT_EQ(CodeOf([] { ParseLabelMode("other"); }), ErrorCode::kConfig);
}

TEST(RuleMode, ClosedLoopRecoversRules) {
  std::ifstream file(CDOXAI_TEST_DATA_DIR "/reference_rules.txt");
  ASSERT_TRUE(file.good());
  SynthSpec spec = Small(280);
  spec.mode = LabelMode::kRule;
  spec.rules = ParseRuleBase(file, spec.partition);
  const auto fleet = GenerateFleet(spec);
  std::vector<int> binary;
  for (int label : fleet.dataset.labels) {
    binary.push_back(label == static_cast<int>(CdoCategory::kLow) ? kRuleLow : kRuleNotLow);
  }
  for (std::size_t i = 0; i < binary.size(); ++i) {
    EXPECT_EQ(binary[i], fleet.truth[i].rule_label);
  }
  const auto inputs = RuleInputs(fleet.dataset);
  const FexaiRun run = EvaluateFexai(spec.partition, inputs, binary, 5, 3);
  EXPECT_EQ(run.report.mean.accuracy, 1.0);
  for (const FuzzyRule& r : run.rules.rules) {
    const FuzzyRule* expected = spec.rules.Find(r.antecedent);
    ASSERT_NE(expected, nullptr);
    EXPECT_EQ(r.consequent, expected->consequent);
  }
}

}  // namespace
}  // namespace cdoxai
