#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "groundseg/classes.hpp"
#include "groundseg/czm.hpp"
#include "groundseg/gle.hpp"
#include "groundseg/plane_fit.hpp"
#include "groundseg/point_cloud.hpp"
#include "groundseg/rnr.hpp"

namespace groundseg {

struct PipelineConfig {
  ZoneConfig zones;
  RnrParams rnr;
  VpfParams vpf;
  GpfParams gpf;
  GleParams gle;

  bool enable_rnr = true;
  bool enable_rvpf = true;
  bool enable_tgr = true;
  bool freeze_thresholds = false;  ///< skip the adaptive update (ablations)
  int parallelism = 1;

  void validate() const;
};

enum class BinStatus {
  Empty,
  Sparse,      ///< below min_points_per_bin; every point non-ground
  NoPlane,     ///< R-GPF could not fit (too few points after R-VPF, degenerate)
  Classified,
};

struct BinReport {
  BinIndex index;
  BinStatus status = BinStatus::Empty;
  std::size_t points = 0;
  std::size_t vertical = 0;
  std::optional<PlaneEstimate> plane;
  PlaneVerdict verdict;
};

struct StageTimings {
  double rnr_ms = 0.0;
  double czm_ms = 0.0;
  double fit_ms = 0.0;   ///< R-VPF, R-GPF and GLE over all bins
  double update_ms = 0.0;
  double tgr_ms = 0.0;
  double total_ms = 0.0;
};

struct SegmentationResult {
  PointClassification classes;
  std::vector<BinReport> bins;  ///< ordered by (zone, ring, sector)
  StageTimings timings;

  std::size_t count(PointClass c) const;
};

struct SegmentOutput {
  SegmentationResult result;
  AdaptiveState state;
};

/// Initial adaptive state for a config: zero thresholds, configured noise height.
AdaptiveState initial_state(const PipelineConfig& cfg);

/// One frame: RNR, CZM, per-bin R-VPF/R-GPF/GLE, threshold update, TGR.
/// `state` holds thresholds learned from earlier frames; the returned state
/// is what the next frame should use.
SegmentOutput segment(const PointCloud& cloud, const AdaptiveState& state, const PipelineConfig& cfg);

/// Frame-to-frame driver that owns the adaptive state.
class GroundSegmenter {
 public:
  explicit GroundSegmenter(PipelineConfig cfg);
  GroundSegmenter(PipelineConfig cfg, AdaptiveState state);

  SegmentationResult process(const PointCloud& cloud);

  const AdaptiveState& state() const { return state_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  PipelineConfig cfg_;
  AdaptiveState state_;
};

/// Single-plane RANSAC over random triplets; inliers (|distance| < dist_thr)
/// of the best plane are ground. Throws ContractViolation for n < 3.
SegmentationResult ransac_baseline(const PointCloud& cloud, int iterations, double dist_thr,
                                   std::uint64_t seed);

}  // namespace groundseg
