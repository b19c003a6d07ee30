#include <sstream>

#include <gtest/gtest.h>

#include "cdoxai/config.h"
#include "test_util.h"

namespace cdoxai {
namespace {

TEST(Fnv1a64, KnownVectors) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(PipelineConfig, EveryKeyRoundTrips) {
  const PipelineConfig defaults;
  PipelineConfig copy;
  for (const auto& key : PipelineConfig::Keys()) copy.Set(key, defaults.Get(key));
  EXPECT_EQ(copy.Canonical(), defaults.Canonical());
  EXPECT_EQ(copy.Hash(), defaults.Hash());
  EXPECT_EQ(defaults.Hash().size(), 16u);
}

TEST(PipelineConfig, ApplyParsesCommentsAndWhitespace) {
  PipelineConfig cfg;
  std::istringstream in(
      "# tuned run\n"
      "  seed = 7   # trailing comment\n"
      "\n"
      "rf_trees=50\n"
      "synth_mode = rule\n"
      "out_dir = elsewhere\n");
  ApplyConfig(in, cfg);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.forest.n_trees, 50);
  EXPECT_EQ(cfg.synth_mode, LabelMode::kRule);
  EXPECT_EQ(cfg.out_dir, "elsewhere");
}

TEST(PipelineConfig, HashTracksSettingsButNotOutDir) {
  PipelineConfig a;
  PipelineConfig b;
  b.out_dir = "other";
  EXPECT_EQ(a.Hash(), b.Hash());
  b.Set("gb_learning_rate", "0.2");
  EXPECT_NE(a.Hash(), b.Hash());
}

TEST(PipelineConfig, ErrorsCarryLine) {
  PipelineConfig cfg;
  std::istringstream unknown("seed = 1\nbogus = 2\n");
  std::size_t line = 0;
  EXPECT_EQ(CodeOf([&] { ApplyConfig(unknown, cfg); }, &line), ErrorCode::kConfig);
  EXPECT_EQ(line, 2u);
  std::istringstream bad_value("rf_trees = many\n");
  EXPECT_EQ(CodeOf([&] { ApplyConfig(bad_value, cfg); }, &line), ErrorCode::kConfig);
  EXPECT_EQ(line, 1u);
  std::istringstream no_equals("seed 4\n");
  EXPECT_EQ(CodeOf([&] { ApplyConfig(no_equals, cfg); }), ErrorCode::kConfig);
}

TEST(PipelineConfig, ValidateRejectsUnorderedThresholds) {
  PipelineConfig cfg;
  cfg.Set("adherence_medium", "0.6");
  EXPECT_EQ(CodeOf([&] { cfg.Validate(); }), ErrorCode::kConfig);
  PipelineConfig folds;
  folds.Set("k_folds", "1");
  EXPECT_EQ(CodeOf([&] { folds.Validate(); }), ErrorCode::kConfig);
  PipelineConfig fuzzy;
  fuzzy.Set("mdrate_upper", "0.01");
  EXPECT_EQ(CodeOf([&] { fuzzy.Validate(); }), ErrorCode::kConfig);
  EXPECT_NO_THROW(PipelineConfig{}.Validate());
}

TEST(PipelineConfig, DerivedViews) {
  PipelineConfig cfg;
  cfg.Set("fltsegments_lower", "200");
  cfg.Set("high_positive_class", "0");
  cfg.Set("rf_trees", "11");
  EXPECT_EQ(cfg.partition().features[1].lower, 200);
  EXPECT_EQ(cfg.scenario(ScenarioId::kHighVsNotHigh).positive_class, 0);
  EXPECT_EQ(cfg.scenario(ScenarioId::kLowVsNotLow).positive_class, 1);
  EXPECT_EQ(cfg.model(EnsembleKind::kRandomForest).forest.n_trees, 11);
  EXPECT_EQ(cfg.model(EnsembleKind::kGradientBoosting).kind,
            EnsembleKind::kGradientBoosting);
}

}  // namespace
}  // namespace cdoxai
