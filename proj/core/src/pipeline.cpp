#include "groundseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <thread>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; results must be written to index-owned slots.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  constexpr std::size_t kChunk = 8;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) body(i);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
}

BinReport process_bin(const PointCloud& cloud, const Bin& bin, const AdaptiveState& state,
                      const PipelineConfig& cfg) {
  BinReport report;
  report.index = bin.index;
  report.points = bin.points.size();
  if (bin.points.empty()) {
    report.status = BinStatus::Empty;
    return report;
  }
  if (bin.points.size() < cfg.zones.min_points_per_bin) {
    report.status = BinStatus::Sparse;
    return report;
  }

  std::span<const PointId> candidates = bin.points;
  VerticalSplit split;
  if (cfg.enable_rvpf) {
    split = r_vpf(cloud, bin.points, cfg.vpf, cfg.gpf);
    report.vertical = split.vertical.size();
    candidates = split.remaining;
  }

  GroundFit fit = r_gpf(cloud, bin.index, candidates, cfg.gpf, cfg.zones.min_points_per_bin);
  if (!fit.ok()) {
    report.status = BinStatus::NoPlane;
    return report;
  }
  report.status = BinStatus::Classified;
  report.verdict = classify(fit.plane, state, cfg.gle);
  report.plane = std::move(fit.plane);
  return report;
}

}  // namespace

void PipelineConfig::validate() const {
  zones.validate();
  rnr.validate();
  vpf.validate();
  gpf.validate();
  gle.validate();
  if (parallelism < 1) throw ContractViolation("pipeline: parallelism must be >= 1");
}

std::size_t SegmentationResult::count(PointClass c) const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

AdaptiveState initial_state(const PipelineConfig& cfg) {
  return AdaptiveState::initial(cfg.gle, cfg.rnr.height_thr);
}

SegmentOutput segment(const PointCloud& cloud, const AdaptiveState& state, const PipelineConfig& cfg) {
  cfg.validate();
  if (!cloud.consistent()) throw ContractViolation("segment: inconsistent cloud columns");
  if (state.rings() != cfg.gle.adaptive_rings) {
    throw ContractViolation("segment: adaptive state does not match gle.adaptive_ring_count");
  }

  SegmentOutput out{SegmentationResult{}, state};
  auto& result = out.result;
  const std::size_t n = cloud.size();
  if (n == 0) return out;

  const auto t_start = Clock::now();
  result.classes.assign(n, PointClass::NonGround);

  // RNR
  auto t0 = Clock::now();
  std::vector<PointId> kept;
  if (cfg.enable_rnr) {
    RnrParams rnr = cfg.rnr;
    rnr.height_thr = state.noise_height;
    NoiseSplit split = remove_noise(cloud, rnr);
    for (const PointId id : split.noise) result.classes[id] = PointClass::Noise;
    kept = std::move(split.kept);
  } else {
    kept.resize(n);
    std::iota(kept.begin(), kept.end(), PointId{0});
  }
  result.timings.rnr_ms = ms_since(t0);

  // CZM; overflow points stay non-ground
  t0 = Clock::now();
  const Partition czm = partition(cloud, kept, cfg.zones);
  result.timings.czm_ms = ms_since(t0);

  // per-bin R-VPF, R-GPF and GLE against the thresholds of earlier frames
  t0 = Clock::now();
  result.bins.resize(czm.bins.size());
  parallel_for(czm.bins.size(), cfg.parallelism,
               [&](std::size_t b) { result.bins[b] = process_bin(cloud, czm.bins[b], state, cfg); });
  result.timings.fit_ms = ms_since(t0);

  // A-GLE update; samples ordered by bin, i.e. by global ring then sector
  t0 = Clock::now();
  std::vector<DefiniteSample> definite;
  for (const auto& bin : result.bins) {
    if (bin.plane && bin.verdict.definite) {
      definite.push_back({bin.index.global_ring, bin.plane->elevation, bin.plane->flatness});
    }
  }
  if (!cfg.freeze_thresholds) out.state = update_thresholds(state, definite, cfg.gle);
  result.timings.update_ms = ms_since(t0);

  // TGR against this frame's definite planes only
  t0 = Clock::now();
  if (cfg.enable_tgr) {
    std::vector<RevertCandidate> candidates;
    std::vector<std::size_t> owner;
    for (std::size_t b = 0; b < result.bins.size(); ++b) {
      const auto& bin = result.bins[b];
      if (bin.plane && bin.verdict.reason == VerdictReason::TooRough) {
        candidates.push_back({bin.index.global_ring, bin.plane->flatness, bin.verdict});
        owner.push_back(b);
      }
    }
    temporal_ground_revert(candidates, definite, cfg.gle);
    for (std::size_t i = 0; i < candidates.size(); ++i) result.bins[owner[i]].verdict = candidates[i].verdict;
  }
  result.timings.tgr_ms = ms_since(t0);

  for (const auto& bin : result.bins) {
    if (!bin.plane || !bin.verdict.ground) continue;
    for (const PointId id : bin.plane->inliers) result.classes[id] = PointClass::Ground;
  }
  result.timings.total_ms = ms_since(t_start);
  return out;
}

GroundSegmenter::GroundSegmenter(PipelineConfig cfg) : cfg_(std::move(cfg)), state_(initial_state(cfg_)) {
  cfg_.validate();
}

GroundSegmenter::GroundSegmenter(PipelineConfig cfg, AdaptiveState state)
    : cfg_(std::move(cfg)), state_(std::move(state)) {
  cfg_.validate();
}

SegmentationResult GroundSegmenter::process(const PointCloud& cloud) {
  SegmentOutput out = segment(cloud, state_, cfg_);
  state_ = std::move(out.state);
  return std::move(out.result);
}

}  // namespace groundseg
