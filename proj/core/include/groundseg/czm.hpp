#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "groundseg/point_cloud.hpp"

namespace groundseg {

/// Concentric zone model geometry. Zone k covers horizontal ranges
/// [boundaries[k], boundaries[k+1]) and is split evenly into
/// ring_counts[k] rings and sector_counts[k] sectors.
struct ZoneConfig {
  std::vector<int> ring_counts{2, 4, 4, 4};
  std::vector<int> sector_counts{16, 32, 54, 32};
  std::vector<double> boundaries{2.7, 12.3625, 22.025, 41.35, 80.0};
  std::size_t min_points_per_bin = 10;

  std::size_t num_zones() const noexcept { return ring_counts.size(); }
  double min_range() const { return boundaries.front(); }
  double max_range() const { return boundaries.back(); }
  int total_rings() const;
  std::size_t total_bins() const;

  void validate() const;
};

struct BinIndex {
  int zone = 0;
  int ring = 0;
  int sector = 0;
  int global_ring = 1;  ///< 1-based ring counter across all zones

  friend bool operator==(const BinIndex&, const BinIndex&) = default;
};

/// One polar cell. `points` is ordered by ascending z (ties by id).
struct Bin {
  BinIndex index;
  std::vector<PointId> points;
};

struct Partition {
  std::vector<Bin> bins;          ///< every bin, ordered by (zone, ring, sector)
  std::vector<PointId> overflow;  ///< points outside [min_range, max_range)
};

/// Global ring m = 1 + rings of preceding zones + ring. Throws
/// ContractViolation for an index outside `cfg`.
int global_ring_of(const BinIndex& index, const ZoneConfig& cfg);

/// Flat position of a bin inside Partition::bins.
std::size_t flat_bin_index(const BinIndex& index, const ZoneConfig& cfg);

/// Assigns points to bins by (range, azimuth), then sorts each bin by z.
Partition partition(const PointCloud& cloud, const ZoneConfig& cfg);
Partition partition(const PointCloud& cloud, std::span<const PointId> ids, const ZoneConfig& cfg);

/// The older strategy: sort every point by z first, then scatter into bins.
/// Produces the same bins as partition().
Partition partition_global_sort(const PointCloud& cloud, std::span<const PointId> ids,
                                 const ZoneConfig& cfg);

struct SortTiming {
  double global_sort_ms = 0.0;
  double binwise_sort_ms = 0.0;
  bool identical = true;
};

/// Times both strategies over `repetitions` runs and reports medians.
SortTiming sort_strategy_bench(const PointCloud& cloud, const ZoneConfig& cfg, int repetitions = 10);

}  // namespace groundseg
