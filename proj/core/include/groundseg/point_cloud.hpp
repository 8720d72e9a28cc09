#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace groundseg {

using PointId = std::uint32_t;

/// Columnar store for one LiDAR scan. Coordinates are meters in the sensor
/// frame (z up); intensity is reflectance in [0, 1]; ring 0 is the bottom-most
/// laser.
struct PointCloud {
  std::vector<float> x;
  std::vector<float> y;
  std::vector<float> z;
  std::vector<float> intensity;
  std::vector<std::uint16_t> ring;

  std::size_t size() const noexcept { return x.size(); }
  bool empty() const noexcept { return x.empty(); }

  void reserve(std::size_t n) {
    x.reserve(n);
    y.reserve(n);
    z.reserve(n);
    intensity.reserve(n);
    ring.reserve(n);
  }

  void push_back(float px, float py, float pz, float pi, std::uint16_t pr = 0) {
    x.push_back(px);
    y.push_back(py);
    z.push_back(pz);
    intensity.push_back(pi);
    ring.push_back(pr);
  }

  Eigen::Vector3d point(PointId i) const { return {x[i], y[i], z[i]}; }

  /// All columns have the same length.
  bool consistent() const noexcept {
    const auto n = x.size();
    return y.size() == n && z.size() == n && intensity.size() == n && ring.size() == n;
  }
};

/// Per-point semantic class ids, aligned with a PointCloud.
struct LabelSet {
  std::vector<std::uint16_t> semantic;

  std::size_t size() const noexcept { return semantic.size(); }
};

/// Well-known semantic ids of the KITTI labeling scheme used by the
/// generator and the default evaluation mapping.
namespace semantic {
inline constexpr std::uint16_t kOutlier = 1;
inline constexpr std::uint16_t kCar = 10;
inline constexpr std::uint16_t kRoad = 40;
inline constexpr std::uint16_t kParking = 44;
inline constexpr std::uint16_t kSidewalk = 48;
inline constexpr std::uint16_t kOtherGround = 49;
inline constexpr std::uint16_t kBuilding = 50;
inline constexpr std::uint16_t kLaneMarking = 60;
inline constexpr std::uint16_t kVegetation = 70;
inline constexpr std::uint16_t kTerrain = 72;
}  // namespace semantic

}  // namespace groundseg
