#pragma once

#include <vector>

#include "groundseg/point_cloud.hpp"

namespace groundseg {

/// Reflected noise removal gates. A point is noise iff it lies in one of the
/// `num_rings` bottom rings, below `height_thr`, and is dimmer than
/// `intensity_thr`.
struct RnrParams {
  int num_rings = 20;
  double intensity_thr = 0.2;
  double height_thr = -2.523;

  void validate() const;
};

struct NoiseSplit {
  std::vector<PointId> noise;
  std::vector<PointId> kept;
};

NoiseSplit remove_noise(const PointCloud& cloud, const RnrParams& params);

/// The naive alternative: every point with z < z_min is rejected.
NoiseSplit height_filter(const PointCloud& cloud, double z_min);

}  // namespace groundseg
