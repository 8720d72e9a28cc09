#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "groundseg/error.hpp"
#include "groundseg/pipeline.hpp"
#include "groundseg/scene.hpp"
#include "scenarios.hpp"

namespace groundseg {
namespace {

void expect_partitioned(const SegmentationResult& r, std::size_t n) {
  ASSERT_EQ(r.classes.size(), n);
  EXPECT_EQ(r.count(PointClass::Ground) + r.count(PointClass::NonGround) + r.count(PointClass::Noise), n);
}

TEST(Segment, FlatSceneLearnsGroundElevation) {
  const PipelineConfig cfg;
  const SceneSpec spec = scene_preset("flat");
  GroundSegmenter seg(cfg);
  const Scene first = generate_scene(spec, 1);
  seg.process(first.cloud);
  const double e1 = seg.state().elevation_thr[0];
  EXPECT_GT(e1, -spec.sensor_height);
  EXPECT_LT(e1, -spec.sensor_height + 0.05);
  EXPECT_NEAR(seg.state().noise_height, -spec.sensor_height - 0.5, 0.02);

  const Scene second = generate_scene(spec, 2);
  const SegmentationResult r = seg.process(second.cloud);
  expect_partitioned(r, second.cloud.size());
  EXPECT_GE(evaluate(r.classes, second.labels).recall, 0.99);
}

TEST(Segment, EmptyCloudLeavesStateUnchanged) {
  const PipelineConfig cfg;
  AdaptiveState state = initial_state(cfg);
  state.elevation_thr[0] = -1.6;
  const SegmentOutput out = segment(PointCloud{}, state, cfg);
  EXPECT_TRUE(out.result.classes.empty());
  EXPECT_EQ(out.state, state);
}

TEST(Segment, RejectsMismatchedState) {
  PipelineConfig cfg;
  AdaptiveState state = initial_state(cfg);
  cfg.gle.adaptive_rings = 3;
  EXPECT_THROW(segment(fixture::grid(4, 5, 0, 1, -1.7), state, cfg), ContractViolation);
}

TEST(Segment, OverflowAndSparseBinsAreNonGround) {
  PointCloud c = fixture::grid(3, 5.0, 0.1, 0.5, -1.723);  // 9 points, one sparse bin
  c.push_back(100.0f, 0.0f, -1.723f, 0.5f, 30);
  c.push_back(1.0f, 0.0f, -1.723f, 0.5f, 30);
  const PipelineConfig cfg;
  const SegmentOutput out = segment(c, initial_state(cfg), cfg);
  expect_partitioned(out.result, c.size());
  EXPECT_EQ(out.result.count(PointClass::Ground), 0u);
}

TEST(Segment, NoisePredictionsAreInjectedNoise) {
  const Scene s = generate_scene(scene_preset("noisy"), 3);
  const PipelineConfig cfg;
  const SegmentOutput out = segment(s.cloud, initial_state(cfg), cfg);
  expect_partitioned(out.result, s.cloud.size());
  std::size_t noise = 0;
  for (std::size_t i = 0; i < s.cloud.size(); ++i) {
    if (out.result.classes[i] != PointClass::Noise) continue;
    ++noise;
    EXPECT_EQ(s.labels.semantic[i], semantic::kOutlier);
  }
  EXPECT_EQ(noise, static_cast<std::size_t>(scene_preset("noisy").noise.count));
}

TEST(Segment, VerticalFittingRaisesUpperTerraceRecall) {
  const SceneSpec spec = scene_preset("terrace");
  PipelineConfig with;
  PipelineConfig without;
  without.enable_rvpf = false;
  const Scene scene = generate_scene(spec, 5);
  const SegmentOutput a = segment(scene.cloud, initial_state(with), with);
  const SegmentOutput b = segment(scene.cloud, initial_state(without), without);
  const double on = scenario::recall_of(scene, a.result.classes, spec.upper_semantic);
  const double off = scenario::recall_of(scene, b.result.classes, spec.upper_semantic);
  EXPECT_LT(off, on);
  EXPECT_GT(on, 0.95);
}

TEST(Segment, DeterministicAcrossParallelism) {
  const SceneSpec spec = scene_preset("noisy");
  std::vector<std::vector<PointClassification>> outputs;
  std::vector<AdaptiveState> states;
  for (int threads : {1, 2, 4, 7}) {
    PipelineConfig cfg;
    cfg.parallelism = threads;
    GroundSegmenter seg(cfg);
    std::vector<PointClassification> frames;
    for (int k = 0; k < 3; ++k) frames.push_back(seg.process(generate_scene(spec, 40 + k).cloud).classes);
    outputs.push_back(std::move(frames));
    states.push_back(seg.state());
  }
  for (std::size_t i = 1; i < outputs.size(); ++i) {
    EXPECT_EQ(outputs[i], outputs[0]);
    EXPECT_EQ(states[i], states[0]);
  }
}

TEST(Segment, SplitSessionReplayMatchesSingleSession) {
  const PipelineConfig cfg;
  const SceneSpec spec = scene_preset("sloped");
  std::vector<Scene> scenes;
  for (int k = 0; k < 6; ++k) scenes.push_back(generate_scene(spec, 60 + k));

  GroundSegmenter whole(cfg);
  std::vector<PointClassification> single;
  for (const auto& s : scenes) single.push_back(whole.process(s.cloud).classes);

  GroundSegmenter first(cfg);
  std::vector<PointClassification> split;
  for (int k = 0; k < 3; ++k) split.push_back(first.process(scenes[k].cloud).classes);
  GroundSegmenter second(cfg, first.state());
  for (int k = 3; k < 6; ++k) split.push_back(second.process(scenes[k].cloud).classes);

  EXPECT_EQ(split, single);
  EXPECT_EQ(second.state(), whole.state());
}

TEST(Segment, AllNovelStagesDisabledStillPartitions) {
  PipelineConfig cfg;
  cfg.enable_rnr = false;
  cfg.enable_rvpf = false;
  cfg.enable_tgr = false;
  cfg.freeze_thresholds = true;
  const Scene s = generate_scene(scene_preset("noisy"), 8);
  const AdaptiveState state = initial_state(cfg);
  const SegmentOutput out = segment(s.cloud, state, cfg);
  expect_partitioned(out.result, s.cloud.size());
  EXPECT_EQ(out.result.count(PointClass::Noise), 0u);
  EXPECT_EQ(out.state, state);
  EXPECT_GT(out.result.count(PointClass::Ground), s.cloud.size() / 2);
}

TEST(Segment, TgrDoesNotFeedHistories) {
  const Scene s = generate_scene(scene_preset("rough"), 12);
  PipelineConfig with;
  PipelineConfig without;
  without.enable_tgr = false;
  AdaptiveState state = initial_state(with);
  // warm the thresholds on a smooth frame so the rough frame has rejections
  state = segment(generate_scene(scene_preset("flat"), 11).cloud, state, with).state;
  const SegmentOutput a = segment(s.cloud, state, with);
  const SegmentOutput b = segment(s.cloud, state, without);
  EXPECT_EQ(a.state, b.state);
}

TEST(Segment, BinReportsCarryFlags) {
  const Scene s = generate_scene(scene_preset("terrace"), 6);
  const PipelineConfig cfg;
  const SegmentOutput out = segment(s.cloud, initial_state(cfg), cfg);
  std::size_t vertical = 0, classified = 0;
  for (const auto& bin : out.result.bins) {
    vertical += bin.vertical;
    if (bin.status == BinStatus::Classified) {
      ++classified;
      ASSERT_TRUE(bin.plane.has_value());
      EXPECT_EQ(bin.plane->bin, bin.index);
    } else {
      EXPECT_FALSE(bin.plane.has_value());
      EXPECT_FALSE(bin.verdict.ground);
    }
  }
  EXPECT_GT(vertical, 0u);
  EXPECT_GT(classified, 100u);
  EXPECT_GE(out.result.timings.total_ms, out.result.timings.fit_ms);
}

TEST(Ransac, PerfectPlaneIsAllGround) {
  const PointCloud c = fixture::grid(20, -5.0, -5.0, 10.0, -1.723);
  const SegmentationResult r = ransac_baseline(c, 50, 0.1, 1);
  EXPECT_EQ(r.count(PointClass::Ground), c.size());
}

TEST(Ransac, TooFewPointsThrows) {
  PointCloud c;
  c.push_back(0, 0, 0, 0);
  c.push_back(1, 0, 0, 0);
  EXPECT_THROW(ransac_baseline(c, 10, 0.1, 1), ContractViolation);
}

TEST(Ransac, CollinearCloudIsAllNonGround) {
  PointCloud c;
  for (int i = 0; i < 10; ++i) c.push_back(static_cast<float>(i), 0.0f, 0.0f, 0.5f);
  const SegmentationResult r = ransac_baseline(c, 20, 0.1, 1);
  EXPECT_EQ(r.count(PointClass::NonGround), c.size());
}

TEST(Ransac, LosesToPipelineOnTerrace) {
  const SceneSpec spec = scene_preset("terrace");
  const auto pipeline = scenario::run_sequence(spec, 2, 70, PipelineConfig{});
  const auto ransac = scenario::run_ransac(spec, 2, 70);
  for (int k = 0; k < 2; ++k) EXPECT_LT(ransac[k].f1, pipeline.frames[k].f1);
}

TEST(Ransac, SeedDeterminism) {
  const Scene s = generate_scene(scene_preset("sloped"), 2);
  EXPECT_EQ(ransac_baseline(s.cloud, 100, 0.2, 9).classes, ransac_baseline(s.cloud, 100, 0.2, 9).classes);
}

}  // namespace
}  // namespace groundseg
