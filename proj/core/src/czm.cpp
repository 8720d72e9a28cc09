#include "groundseg/czm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kNoBin = static_cast<std::size_t>(-1);

using ZKey = std::pair<float, PointId>;

/// Precomputed per-zone addressing.
struct ZoneLookup {
  std::vector<double> ring_size;
  std::vector<double> sector_size;
  std::vector<std::size_t> first_bin;

  explicit ZoneLookup(const ZoneConfig& cfg) {
    std::size_t offset = 0;
    for (std::size_t k = 0; k < cfg.num_zones(); ++k) {
      ring_size.push_back((cfg.boundaries[k + 1] - cfg.boundaries[k]) / cfg.ring_counts[k]);
      sector_size.push_back(kTwoPi / cfg.sector_counts[k]);
      first_bin.push_back(offset);
      offset += static_cast<std::size_t>(cfg.ring_counts[k]) * cfg.sector_counts[k];
    }
  }

  std::size_t bin_of(double x, double y, const ZoneConfig& cfg) const {
    const double r = std::hypot(x, y);
    if (!(r >= cfg.min_range() && r < cfg.max_range())) return kNoBin;
    // upper_bound finds the first boundary strictly above r
    const auto it = std::upper_bound(cfg.boundaries.begin(), cfg.boundaries.end(), r);
    const auto zone = static_cast<std::size_t>(std::distance(cfg.boundaries.begin(), it) - 1);
    const int rings = cfg.ring_counts[zone];
    const int sectors = cfg.sector_counts[zone];
    const int ring = std::min(static_cast<int>((r - cfg.boundaries[zone]) / ring_size[zone]), rings - 1);
    double theta = std::atan2(y, x);
    if (theta < 0.0) theta += kTwoPi;
    const int sector = std::min(static_cast<int>(theta / sector_size[zone]), sectors - 1);
    return first_bin[zone] + static_cast<std::size_t>(ring) * sectors + sector;
  }
};

std::vector<Bin> empty_bins(const ZoneConfig& cfg) {
  std::vector<Bin> bins;
  bins.reserve(cfg.total_bins());
  int global = 1;
  for (std::size_t k = 0; k < cfg.num_zones(); ++k) {
    for (int ring = 0; ring < cfg.ring_counts[k]; ++ring, ++global) {
      for (int sector = 0; sector < cfg.sector_counts[k]; ++sector) {
        bins.push_back(Bin{BinIndex{static_cast<int>(k), ring, sector, global}, {}});
      }
    }
  }
  return bins;
}

std::vector<PointId> all_ids(std::size_t n) {
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), PointId{0});
  return ids;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

bool same_bins(const Partition& a, const Partition& b) {
  if (a.bins.size() != b.bins.size() || a.overflow != b.overflow) return false;
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    if (!(a.bins[i].index == b.bins[i].index) || a.bins[i].points != b.bins[i].points) return false;
  }
  return true;
}

}  // namespace

int ZoneConfig::total_rings() const { return std::accumulate(ring_counts.begin(), ring_counts.end(), 0); }

std::size_t ZoneConfig::total_bins() const {
  std::size_t total = 0;
  for (std::size_t k = 0; k < num_zones(); ++k) {
    total += static_cast<std::size_t>(ring_counts[k]) * sector_counts[k];
  }
  return total;
}

void ZoneConfig::validate() const {
  if (ring_counts.empty()) throw ContractViolation("zone config: no zones");
  if (sector_counts.size() != ring_counts.size() || boundaries.size() != ring_counts.size() + 1) {
    throw ContractViolation("zone config: need one ring and sector count per zone and zones+1 boundaries");
  }
  for (std::size_t k = 0; k < ring_counts.size(); ++k) {
    if (ring_counts[k] < 1 || sector_counts[k] < 1) {
      throw ContractViolation("zone config: ring and sector counts must be >= 1");
    }
  }
  if (!(boundaries.front() >= 0.0)) throw ContractViolation("zone config: min_range must be >= 0");
  for (std::size_t k = 1; k < boundaries.size(); ++k) {
    if (!(boundaries[k] > boundaries[k - 1])) {
      throw ContractViolation("zone config: radial boundaries must be strictly increasing");
    }
  }
}

int global_ring_of(const BinIndex& index, const ZoneConfig& cfg) {
  if (index.zone < 0 || static_cast<std::size_t>(index.zone) >= cfg.num_zones() || index.ring < 0 ||
      index.ring >= cfg.ring_counts[index.zone] || index.sector < 0 ||
      index.sector >= cfg.sector_counts[index.zone]) {
    throw ContractViolation("global_ring_of: bin index outside the zone config");
  }
  int preceding = 0;
  for (int k = 0; k < index.zone; ++k) preceding += cfg.ring_counts[k];
  return 1 + preceding + index.ring;
}

std::size_t flat_bin_index(const BinIndex& index, const ZoneConfig& cfg) {
  global_ring_of(index, cfg);  // validates
  std::size_t offset = 0;
  for (int k = 0; k < index.zone; ++k) offset += static_cast<std::size_t>(cfg.ring_counts[k]) * cfg.sector_counts[k];
  return offset + static_cast<std::size_t>(index.ring) * cfg.sector_counts[index.zone] + index.sector;
}

Partition partition(const PointCloud& cloud, const ZoneConfig& cfg) {
  const auto ids = all_ids(cloud.size());
  return partition(cloud, ids, cfg);
}

Partition partition(const PointCloud& cloud, std::span<const PointId> ids, const ZoneConfig& cfg) {
  cfg.validate();
  const ZoneLookup lookup(cfg);
  Partition out;
  out.bins = empty_bins(cfg);

  std::vector<std::size_t> target(ids.size());
  std::vector<std::size_t> counts(out.bins.size(), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const PointId id = ids[i];
    target[i] = lookup.bin_of(cloud.x[id], cloud.y[id], cfg);
    if (target[i] != kNoBin) ++counts[target[i]];
  }
  for (std::size_t b = 0; b < out.bins.size(); ++b) out.bins[b].points.reserve(counts[b]);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (target[i] == kNoBin) {
      out.overflow.push_back(ids[i]);
    } else {
      out.bins[target[i]].points.push_back(ids[i]);
    }
  }

  // Bin-local sort: O(L * M log M) instead of O(N log N) up front.
  std::vector<ZKey> scratch;
  for (auto& bin : out.bins) {
    if (bin.points.size() < 2) continue;
    scratch.clear();
    for (const PointId id : bin.points) scratch.emplace_back(cloud.z[id], id);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t i = 0; i < scratch.size(); ++i) bin.points[i] = scratch[i].second;
  }
  return out;
}

Partition partition_global_sort(const PointCloud& cloud, std::span<const PointId> ids, const ZoneConfig& cfg) {
  cfg.validate();
  const ZoneLookup lookup(cfg);
  Partition out;
  out.bins = empty_bins(cfg);

  std::vector<ZKey> order;
  order.reserve(ids.size());
  for (const PointId id : ids) order.emplace_back(cloud.z[id], id);
  std::sort(order.begin(), order.end());

  std::vector<PointId> overflow;
  for (const auto& [z, id] : order) {
    const std::size_t b = lookup.bin_of(cloud.x[id], cloud.y[id], cfg);
    if (b == kNoBin) {
      overflow.push_back(id);
    } else {
      out.bins[b].points.push_back(id);
    }
  }
  // overflow keeps input order so both strategies agree exactly
  std::vector<bool> is_overflow(cloud.size(), false);
  for (const PointId id : overflow) is_overflow[id] = true;
  for (const PointId id : ids) {
    if (is_overflow[id]) out.overflow.push_back(id);
  }
  return out;
}

SortTiming sort_strategy_bench(const PointCloud& cloud, const ZoneConfig& cfg, int repetitions) {
  if (repetitions < 1) repetitions = 1;
  const auto ids = all_ids(cloud.size());
  std::vector<double> global_ms;
  std::vector<double> binwise_ms;
  SortTiming timing;
  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    const Partition global = partition_global_sort(cloud, ids, cfg);
    global_ms.push_back(elapsed_ms(t0));

    t0 = std::chrono::steady_clock::now();
    const Partition binwise = partition(cloud, ids, cfg);
    binwise_ms.push_back(elapsed_ms(t0));

    if (rep == 0) timing.identical = same_bins(global, binwise);
  }
  timing.global_sort_ms = median(std::move(global_ms));
  timing.binwise_sort_ms = median(std::move(binwise_ms));
  return timing;
}

}  // namespace groundseg
