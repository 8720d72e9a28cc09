#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "groundseg/error.hpp"
#include "groundseg/gle.hpp"
#include "oracles.hpp"

namespace groundseg {
namespace {

PlaneEstimate plane(int m, double uprightness, double elevation, double flatness) {
  PlaneEstimate p;
  p.normal = Eigen::Vector3d(std::sqrt(1.0 - uprightness * uprightness), 0.0, uprightness);
  p.elevation = elevation;
  p.flatness = flatness;
  p.bin.global_ring = m;
  return p;
}

AdaptiveState state_with(double e_thr, double f_thr) {
  AdaptiveState s = AdaptiveState::initial(GleParams{}, -2.523);
  s.elevation_thr.assign(4, e_thr);
  s.flatness_thr.assign(4, f_thr);
  return s;
}

TEST(Classify, NotUprightIsNonGround) {
  const PlaneVerdict v = classify(plane(1, 0.5, -1.7, 0.0), state_with(-1.0, 0.01), GleParams{});
  EXPECT_FALSE(v.ground);
  EXPECT_EQ(v.reason, VerdictReason::NotUpright);
}

TEST(Classify, LowPlaneIsDefiniteGround) {
  const PlaneVerdict v = classify(plane(1, 1.0, -1.7, 0.5), state_with(-1.0, 0.01), GleParams{});
  EXPECT_TRUE(v.ground);
  EXPECT_TRUE(v.definite);
  EXPECT_EQ(v.reason, VerdictReason::GroundByElevation);
}

TEST(Classify, HighButFlatIsGroundNotDefinite) {
  // thresholds built from histories rather than set directly
  GleParams params;
  AdaptiveState s = AdaptiveState::initial(params, -2.523);
  const std::vector<DefiniteSample> samples{{1, -1.0, 0.01}};
  s = update_thresholds(s, samples, params);
  ASSERT_DOUBLE_EQ(s.elevation_thr[0], -1.0);
  ASSERT_DOUBLE_EQ(s.flatness_thr[0], 0.01);
  const PlaneVerdict v = classify(plane(1, 1.0, -0.5, 0.005), s, params);
  EXPECT_TRUE(v.ground);
  EXPECT_FALSE(v.definite);
  EXPECT_EQ(v.reason, VerdictReason::GroundByFlatness);
}

TEST(Classify, HighAndRoughIsTooRough) {
  const PlaneVerdict v = classify(plane(2, 1.0, -0.5, 0.05), state_with(-1.0, 0.01), GleParams{});
  EXPECT_FALSE(v.ground);
  EXPECT_EQ(v.reason, VerdictReason::TooRough);
}

TEST(Classify, OuterRingsUseUprightnessOnly) {
  const PlaneVerdict v = classify(plane(5, 0.9, 3.0, 1.0), state_with(-1.0, 0.01), GleParams{});
  EXPECT_TRUE(v.ground);
  EXPECT_FALSE(v.definite);
  EXPECT_EQ(v.reason, VerdictReason::GroundByUprightness);
}

TEST(Classify, FirstFrameBootstrapsFromZeroThresholds) {
  const AdaptiveState s = AdaptiveState::initial(GleParams{}, -2.523);
  EXPECT_TRUE(classify(plane(1, 1.0, -1.7, 0.001), s, GleParams{}).definite);
}

TEST(Classify, EveryVerdictHasOneConsistentReason) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> up(0.0, 1.0), e(-3.0, 1.0), f(0.0, 0.05);
  std::uniform_int_distribution<int> m(1, 14);
  const AdaptiveState s = state_with(-1.2, 0.02);
  for (int i = 0; i < 5000; ++i) {
    const PlaneVerdict v = classify(plane(m(rng), up(rng), e(rng), f(rng)), s, GleParams{});
    if (v.definite) EXPECT_TRUE(v.ground);
    EXPECT_FALSE(v.reverted);
    const bool ground_reason = v.reason == VerdictReason::GroundByElevation ||
                               v.reason == VerdictReason::GroundByFlatness ||
                               v.reason == VerdictReason::GroundByUprightness;
    EXPECT_EQ(v.ground, ground_reason);
  }
}

TEST(UpdateThresholds, ElevationGateHandValue) {
  GleParams params;
  AdaptiveState s = AdaptiveState::initial(params, -2.523);
  const std::vector<DefiniteSample> samples{{2, 0.1, 0.0}, {2, 0.2, 0.0}, {2, 0.3, 0.0}};
  s = update_thresholds(s, samples, params);
  EXPECT_NEAR(s.elevation_thr[1], 0.28165, 1e-5);
  EXPECT_NEAR(s.elevation_thr[1], 0.2 + std::sqrt(0.02 / 3.0), 1e-15);
  EXPECT_EQ(s.elevation_thr[0], 0.0);  // untouched ring keeps its initial value
}

TEST(UpdateThresholds, NoiseHeightFollowsFirstRing) {
  GleParams params;
  AdaptiveState s = AdaptiveState::initial(params, -2.523);
  const std::vector<DefiniteSample> samples{{1, -1.2, 0.0}, {1, -0.8, 0.0}};
  s = update_thresholds(s, samples, params);
  EXPECT_DOUBLE_EQ(s.noise_height, -1.5);
}

TEST(UpdateThresholds, SingleSampleHasZeroSpread) {
  GleParams params;
  AdaptiveState s = AdaptiveState::initial(params, -2.523);
  const std::vector<DefiniteSample> samples{{3, -1.0, 0.01}};
  s = update_thresholds(s, samples, params);
  EXPECT_EQ(params.b(3), 2.0);
  EXPECT_DOUBLE_EQ(s.flatness_thr[2], 0.01);
  params.flatness_gain = {3.0};
  EXPECT_DOUBLE_EQ(update_thresholds(AdaptiveState::initial(params, -2.523), samples, params).flatness_thr[2], 0.01);
}

TEST(UpdateThresholds, EmptySamplesChangeNothing) {
  const GleParams params;
  const AdaptiveState s0 = AdaptiveState::initial(params, -2.523);
  EXPECT_EQ(update_thresholds(s0, {}, params), s0);
  const std::vector<DefiniteSample> outer{{9, -1.0, 0.01}};
  EXPECT_EQ(update_thresholds(s0, outer, params), s0);
}

TEST(UpdateThresholds, SampleStdevOption) {
  GleParams params;
  params.stdev = StdevKind::Sample;
  const std::vector<DefiniteSample> samples{{1, 0.1, 0.0}, {1, 0.2, 0.0}, {1, 0.3, 0.0}};
  const AdaptiveState s = update_thresholds(AdaptiveState::initial(params, -2.523), samples, params);
  EXPECT_NEAR(s.elevation_thr[0], 0.3, 1e-15);
}

TEST(UpdateThresholds, HistoryCapKeepsNewest) {
  GleParams params;
  params.history_cap = 3;
  AdaptiveState s = AdaptiveState::initial(params, -2.523);
  for (int i = 0; i < 10; ++i) {
    const std::vector<DefiniteSample> one{{1, -2.0 + 0.1 * i, 0.001 * i}};
    s = update_thresholds(s, one, params);
  }
  ASSERT_EQ(s.elevations[0].size(), 3u);
  EXPECT_DOUBLE_EQ(s.elevations[0].front(), -2.0 + 0.1 * 7);
}

TEST(UpdateThresholds, RecomputableFromHistories) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> e(-1.7, 0.05), f(0.002, 0.001);
  std::uniform_int_distribution<int> ring(1, 6), count(0, 12);
  GleParams params;
  params.elevation_gain = {1.0, 0.9, 0.8, 0.7};
  params.flatness_gain = {3.0, 2.0, 1.5, 1.0};
  AdaptiveState s = AdaptiveState::initial(params, -2.523);
  for (int frame = 0; frame < 200; ++frame) {
    std::vector<DefiniteSample> batch;
    for (int k = count(rng); k > 0; --k) batch.push_back({ring(rng), e(rng), std::abs(f(rng))});
    s = update_thresholds(s, batch, params);
    for (int m = 1; m <= 4; ++m) {
      const auto i = static_cast<std::size_t>(m - 1);
      if (s.elevations[i].empty()) continue;
      ASSERT_NEAR(s.elevation_thr[i], oracle::gated(s.elevations[i], params.a(m)), 1e-12);
      ASSERT_NEAR(s.flatness_thr[i], oracle::gated(s.flatnesses[i], params.b(m)), 1e-12);
    }
    if (!s.elevations[0].empty()) ASSERT_NEAR(s.noise_height, oracle::gated(s.elevations[0], 0.0) - 0.5, 1e-12);
  }
}

TEST(UpdateThresholds, OutlierInfluenceShrinksWithHistoryLength) {
  GleParams params;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> f(0.002, 0.0005);
  const double outlier = 0.5;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n : {10u, 100u, 1000u}) {
    AdaptiveState s = AdaptiveState::initial(params, -2.523);
    std::vector<DefiniteSample> batch;
    for (std::size_t i = 0; i < n; ++i) batch.push_back({1, -1.7, f(rng)});
    s = update_thresholds(s, batch, params);
    const double before = s.flatness_thr[0];
    const std::vector<DefiniteSample> spike{{1, -1.7, outlier}};
    const double change = update_thresholds(s, spike, params).flatness_thr[0] - before;
    EXPECT_GT(change, 0.0);
    EXPECT_LE(change, (1.0 + params.b(1)) * outlier / std::sqrt(static_cast<double>(n)));
    EXPECT_GE(change, 0.5 * params.b(1) * outlier / std::sqrt(static_cast<double>(n)));
    EXPECT_LT(change, previous);
    previous = change;
  }
}

TEST(UpdateThresholds, ElevationGateCoversAboutEightyFourPercent) {
  GleParams params;
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    std::normal_distribution<double> e(-1.7 + 0.1 * trial, 0.03 + 0.01 * trial);
    std::vector<DefiniteSample> batch;
    for (int i = 0; i < 5000; ++i) batch.push_back({1, e(rng), 0.001});
    const AdaptiveState s = update_thresholds(AdaptiveState::initial(params, -2.523), batch, params);
    std::size_t below = 0;
    for (int i = 0; i < 5000; ++i) below += e(rng) < s.elevation_thr[0];
    EXPECT_NEAR(below / 5000.0, 0.8413, 0.03) << trial;
  }
}

std::vector<RevertCandidate> rough(int m, std::initializer_list<double> flatness) {
  std::vector<RevertCandidate> out;
  for (double f : flatness) {
    RevertCandidate c;
    c.global_ring = m;
    c.flatness = f;
    c.verdict.reason = VerdictReason::TooRough;
    out.push_back(c);
  }
  return out;
}

TEST(TemporalRevert, HandEvaluatedThreshold) {
  const GleParams params;
  const std::vector<DefiniteSample> definite{{2, -1.7, 0.01}, {2, -1.7, 0.02}, {2, -1.7, 0.03}};
  const auto thr = frame_flatness_thresholds(definite, params);
  EXPECT_NEAR(thr[1], 0.032247, 1e-6);
  EXPECT_NEAR(thr[1], 0.02 + 1.5 * std::sqrt(2e-4 / 3.0), 1e-15);
  EXPECT_TRUE(std::isnan(thr[0]));

  auto cands = rough(2, {0.028, 0.05});
  temporal_ground_revert(cands, definite, params);
  EXPECT_TRUE(cands[0].verdict.ground);
  EXPECT_TRUE(cands[0].verdict.reverted);
  EXPECT_EQ(cands[0].verdict.reason, VerdictReason::Reverted);
  EXPECT_FALSE(cands[1].verdict.ground);
  EXPECT_EQ(cands[1].verdict.reason, VerdictReason::TooRough);
}

TEST(TemporalRevert, RingWithoutDefinitePlanesRevertsNothing) {
  const std::vector<DefiniteSample> definite{{2, -1.7, 0.01}, {2, -1.7, 0.02}};
  auto cands = rough(1, {0.0, 1e-9});
  temporal_ground_revert(cands, definite, GleParams{});
  for (const auto& c : cands) EXPECT_FALSE(c.verdict.ground);
}

TEST(TemporalRevert, OnlyTooRoughVerdictsAreTouched) {
  const std::vector<DefiniteSample> definite{{1, -1.7, 0.01}};
  auto cands = rough(1, {0.001});
  cands[0].verdict.reason = VerdictReason::NotUpright;
  temporal_ground_revert(cands, definite, GleParams{});
  EXPECT_FALSE(cands[0].verdict.ground);
}

TEST(GleParams, ValidateRejectsBadValues) {
  GleParams p;
  p.noise_margin = 0.1;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = GleParams{};
  p.revert_gain = {};
  EXPECT_THROW(p.validate(), ContractViolation);
  p = GleParams{};
  p.uprightness_thr = 0.0;
  EXPECT_THROW(p.validate(), ContractViolation);
}

}  // namespace
}  // namespace groundseg
