#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "groundseg/czm.hpp"
#include "groundseg/pipeline.hpp"
#include "groundseg/scene.hpp"

namespace {

using namespace groundseg;

// About 100k points: 64 rings x 1800 columns with a few misses above the horizon.
const Scene& frame_100k() {
  static const Scene scene = [] {
    SceneSpec spec = scene_preset("flat");
    spec.columns = 1800;
    return generate_scene(spec, 1);
  }();
  return scene;
}

void BM_Segment(benchmark::State& state) {
  const Scene& scene = frame_100k();
  PipelineConfig cfg;
  cfg.parallelism = static_cast<int>(state.range(0));
  const AdaptiveState warm = segment(scene.cloud, initial_state(cfg), cfg).state;
  for (auto _ : state) {
    auto out = segment(scene.cloud, warm, cfg);
    benchmark::DoNotOptimize(out.result.classes.data());
  }
  state.counters["points"] = static_cast<double>(scene.cloud.size());
  state.counters["Hz"] = benchmark::Counter(static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Segment)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SegmentAblation(benchmark::State& state) {
  const Scene& scene = frame_100k();
  PipelineConfig cfg;
  cfg.enable_rnr = state.range(0) & 1;
  cfg.enable_rvpf = state.range(0) & 2;
  cfg.enable_tgr = state.range(0) & 4;
  const AdaptiveState warm = segment(scene.cloud, initial_state(cfg), cfg).state;
  for (auto _ : state) benchmark::DoNotOptimize(segment(scene.cloud, warm, cfg).result.classes.data());
}
BENCHMARK(BM_SegmentAblation)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

void BM_PartitionBinwiseSort(benchmark::State& state) {
  const Scene& scene = frame_100k();
  const ZoneConfig zones;
  for (auto _ : state) benchmark::DoNotOptimize(partition(scene.cloud, zones).bins.data());
}
BENCHMARK(BM_PartitionBinwiseSort)->Unit(benchmark::kMillisecond);

void BM_PartitionGlobalSort(benchmark::State& state) {
  const Scene& scene = frame_100k();
  const ZoneConfig zones;
  std::vector<PointId> ids(scene.cloud.size());
  std::iota(ids.begin(), ids.end(), PointId{0});
  for (auto _ : state) benchmark::DoNotOptimize(partition_global_sort(scene.cloud, ids, zones).bins.data());
}
BENCHMARK(BM_PartitionGlobalSort)->Unit(benchmark::kMillisecond);

void BM_RansacBaseline(benchmark::State& state) {
  const Scene& scene = frame_100k();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ransac_baseline(scene.cloud, static_cast<int>(state.range(0)), 0.2, 7).classes.data());
  }
}
BENCHMARK(BM_RansacBaseline)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
