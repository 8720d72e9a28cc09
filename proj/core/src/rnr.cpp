#include "groundseg/rnr.hpp"

#include "groundseg/error.hpp"

namespace groundseg {

void RnrParams::validate() const {
  if (num_rings < 0) throw ContractViolation("rnr: num_rings must be >= 0");
  if (!(intensity_thr >= 0.0 && intensity_thr <= 1.0)) {
    throw ContractViolation("rnr: intensity threshold must lie in [0, 1]");
  }
}

NoiseSplit remove_noise(const PointCloud& cloud, const RnrParams& params) {
  params.validate();
  NoiseSplit out;
  out.kept.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const bool noise = cloud.ring[i] < params.num_rings && cloud.z[i] < params.height_thr &&
                       cloud.intensity[i] < params.intensity_thr;
    (noise ? out.noise : out.kept).push_back(static_cast<PointId>(i));
  }
  return out;
}

NoiseSplit height_filter(const PointCloud& cloud, double z_min) {
  NoiseSplit out;
  out.kept.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    (cloud.z[i] < z_min ? out.noise : out.kept).push_back(static_cast<PointId>(i));
  }
  return out;
}

}  // namespace groundseg
