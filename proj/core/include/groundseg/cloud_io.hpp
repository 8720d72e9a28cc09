#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "groundseg/classes.hpp"
#include "groundseg/point_cloud.hpp"

namespace groundseg {

/// Vertical layout used to bucket points into laser rings. Defaults describe
/// a 64-beam sensor spanning -24.8 to 2.0 degrees.
struct RingLayout {
  int num_rings = 64;
  double fov_down_deg = -24.8;
  double fov_up_deg = 2.0;

  void validate() const;
  /// Elevation of the center of ring `k`, in degrees.
  double ring_center_deg(int k) const;
};

struct RingInference {
  std::vector<std::uint16_t> rings;
  std::size_t degenerate = 0;  ///< points at the origin, assigned ring 0
};

/// Uniform vertical-angle bucketing; monotone non-decreasing in elevation.
RingInference infer_rings(const PointCloud& cloud, const RingLayout& layout = {});

struct ScanReadReport {
  std::size_t records = 0;
  std::size_t skipped_nonfinite = 0;
  std::size_t clamped_intensity = 0;
  std::size_t degenerate_rings = 0;
};

struct ScanRead {
  PointCloud cloud;
  ScanReadReport report;
};

/// Reads little-endian float32 (x, y, z, intensity) quadruples. Non-finite
/// records are dropped; intensities are clamped into [0, 1]; rings are
/// inferred from `layout`. Throws FormatError / IoError.
ScanRead read_scan(const std::filesystem::path& path, const RingLayout& layout = {});
PointCloud load_scan(const std::filesystem::path& path, const RingLayout& layout = {});

void write_scan(const PointCloud& cloud, const std::filesystem::path& path);

/// One little-endian uint32 per point; the semantic id is the lower 16 bits.
LabelSet load_labels(const std::filesystem::path& path, const PointCloud& cloud);
void write_labels(const LabelSet& labels, const std::filesystem::path& path);

/// Per-point class bytes (0 non-ground, 1 ground, 2 noise).
void write_classes(const PointClassification& classes, const std::filesystem::path& path);
PointClassification load_classes(const std::filesystem::path& path, std::size_t expected_points);

/// ASCII PLY with per-vertex RGB. With labels: TP green, FP red, FN blue,
/// TN gray, excluded dark gray. Without: ground green, non-ground gray,
/// noise red.
void export_ply(const PointCloud& cloud, const PointClassification& classes,
                const LabelSet* labels, const GroundClassMap& mapping,
                const std::filesystem::path& path);
void export_ply(const PointCloud& cloud, const PointClassification& classes,
                const std::filesystem::path& path);

}  // namespace groundseg
