#include <chrono>
#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "groundseg/error.hpp"
#include "groundseg/pipeline.hpp"

namespace groundseg {

SegmentationResult ransac_baseline(const PointCloud& cloud, int iterations, double dist_thr, std::uint64_t seed) {
  const std::size_t n = cloud.size();
  if (n < 3) throw ContractViolation("ransac_baseline: need at least 3 points");
  if (iterations < 1) throw ContractViolation("ransac_baseline: iterations must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  SegmentationResult result;
  result.classes.assign(n, PointClass::NonGround);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  Eigen::Vector3d best_normal = Eigen::Vector3d::Zero();
  double best_offset = 0.0;
  std::size_t best_count = 0;

  for (int it = 0; it < iterations; ++it) {
    const Eigen::Vector3d a = cloud.point(static_cast<PointId>(pick(rng)));
    const Eigen::Vector3d b = cloud.point(static_cast<PointId>(pick(rng)));
    const Eigen::Vector3d c = cloud.point(static_cast<PointId>(pick(rng)));
    Eigen::Vector3d normal = (b - a).cross(c - a);
    const double len = normal.norm();
    if (!(len > 1e-9)) continue;
    normal /= len;
    const double offset = -normal.dot(a);

    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = normal.x() * cloud.x[i] + normal.y() * cloud.y[i] + normal.z() * cloud.z[i] + offset;
      if (std::abs(d) < dist_thr) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best_normal = normal;
      best_offset = offset;
    }
  }

  if (best_count > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d =
          best_normal.x() * cloud.x[i] + best_normal.y() * cloud.y[i] + best_normal.z() * cloud.z[i] + best_offset;
      if (std::abs(d) < dist_thr) result.classes[i] = PointClass::Ground;
    }
  }
  result.timings.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace groundseg
