#include "scenarios.hpp"

#include <set>

namespace groundseg::scenario {
namespace {

bool classes_partition(const SegmentationResult& r, std::size_t n) {
  return r.classes.size() == n &&
         r.count(PointClass::Ground) + r.count(PointClass::NonGround) + r.count(PointClass::Noise) == n;
}

}  // namespace

SequenceRun run_sequence(const SceneSpec& spec, int frames, std::uint64_t seed0, const PipelineConfig& cfg) {
  SequenceRun run;
  GroundSegmenter seg(cfg);
  for (int k = 0; k < frames; ++k) {
    const Scene scene = generate_scene(spec, seed0 + static_cast<std::uint64_t>(k));
    const SegmentationResult r = seg.process(scene.cloud);
    run.partition_ok = run.partition_ok && classes_partition(r, scene.cloud.size());
    run.frames.push_back(evaluate(r.classes, scene.labels));
    run.trace.push_back(seg.state());
    run.frame_ms.push_back(r.timings.total_ms);
  }
  return run;
}

std::vector<FrameMetrics> run_ransac(const SceneSpec& spec, int frames, std::uint64_t seed0, int iterations,
                                     double dist_thr) {
  std::vector<FrameMetrics> out;
  for (int k = 0; k < frames; ++k) {
    const auto seed = seed0 + static_cast<std::uint64_t>(k);
    const Scene scene = generate_scene(spec, seed);
    out.push_back(evaluate(ransac_baseline(scene.cloud, iterations, dist_thr, seed).classes, scene.labels));
  }
  return out;
}

double recall_of(const Scene& scene, const PointClassification& classes, std::uint16_t semantic_id) {
  std::size_t total = 0, hit = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (scene.labels.semantic[i] != semantic_id) continue;
    ++total;
    hit += classes[i] == PointClass::Ground;
  }
  return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

RoughSequence rough_sequence(bool enable_tgr) {
  const std::set<int> rough_frames{19, 39, 59, 79, 99};
  PipelineConfig cfg;
  cfg.enable_tgr = enable_tgr;
  GroundSegmenter seg(cfg);
  RoughSequence out;
  for (int k = 0; k < 100; ++k) {
    const bool rough = rough_frames.count(k) > 0;
    const Scene scene = generate_scene(scene_preset(rough ? "rough" : "flat"), 1000 + static_cast<std::uint64_t>(k));
    const SegmentationResult r = seg.process(scene.cloud);
    out.partition_ok = out.partition_ok && classes_partition(r, scene.cloud.size());
    if (!rough) continue;
    const FrameMetrics m = evaluate(r.classes, scene.labels);
    out.rough_recall += m.recall / 5.0;
    out.rough_precision += m.precision / 5.0;
    for (const auto& bin : r.bins) out.reverted_bins += bin.verdict.reverted;
  }
  return out;
}

}  // namespace groundseg::scenario
