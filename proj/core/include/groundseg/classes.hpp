#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace groundseg {

/// Predicted class of a point. Byte values are the on-disk encoding.
enum class PointClass : std::uint8_t {
  NonGround = 0,
  Ground = 1,
  Noise = 2,
};

using PointClassification = std::vector<PointClass>;

/// Mapping from semantic ids to ground truth. Ids in `excluded` are scored
/// as neither ground nor non-ground.
struct GroundClassMap {
  std::vector<std::uint16_t> ground{40, 44, 48, 49, 60, 72};
  std::vector<std::uint16_t> excluded{70};

  bool is_ground(std::uint16_t id) const {
    return std::find(ground.begin(), ground.end(), id) != ground.end();
  }
  bool is_excluded(std::uint16_t id) const {
    return std::find(excluded.begin(), excluded.end(), id) != excluded.end();
  }
};

}  // namespace groundseg
