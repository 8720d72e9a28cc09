#include "groundseg/cloud_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

constexpr std::size_t kScanRecordBytes = 16;
constexpr std::size_t kLabelRecordBytes = 4;

// Points sitting exactly on a ring boundary belong to the upper ring even
// after the degree conversion rounds them a hair low.
constexpr double kRingBoundaryTolerance = 1e-9;

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0x000000FFu) << 24) | ((v & 0x0000FF00u) << 8) | ((v & 0x00FF0000u) >> 8) |
         ((v & 0xFF000000u) >> 24);
}

std::uint32_t read_le32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, sizeof v);
  if constexpr (std::endian::native == std::endian::big) v = byteswap32(v);
  return v;
}

void write_le32(std::ostream& out, std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) v = byteswap32(v);
  char buf[4];
  std::memcpy(buf, &v, sizeof v);
  out.write(buf, 4);
}

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

std::ofstream open_for_write(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::uint16_t ring_of(double x, double y, double z, const RingLayout& layout, bool& degenerate) {
  degenerate = (x == 0.0 && y == 0.0 && z == 0.0);
  if (degenerate) return 0;
  const double elevation = std::atan2(z, std::hypot(x, y)) * 180.0 / std::numbers::pi;
  const double span = layout.fov_up_deg - layout.fov_down_deg;
  const double bucket =
      std::floor((elevation - layout.fov_down_deg) / span * layout.num_rings + kRingBoundaryTolerance);
  const double clamped = std::clamp(bucket, 0.0, static_cast<double>(layout.num_rings - 1));
  return static_cast<std::uint16_t>(clamped);
}

}  // namespace

void RingLayout::validate() const {
  if (num_rings < 1 || num_rings > 65535) throw ContractViolation("ring layout: num_rings out of range");
  if (!(fov_down_deg < fov_up_deg)) throw ContractViolation("ring layout: fov_down must be below fov_up");
}

double RingLayout::ring_center_deg(int k) const {
  return fov_down_deg + (k + 0.5) * (fov_up_deg - fov_down_deg) / num_rings;
}

RingInference infer_rings(const PointCloud& cloud, const RingLayout& layout) {
  layout.validate();
  RingInference out;
  out.rings.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool degenerate = false;
    out.rings[i] = ring_of(cloud.x[i], cloud.y[i], cloud.z[i], layout, degenerate);
    if (degenerate) ++out.degenerate;
  }
  return out;
}

ScanRead read_scan(const std::filesystem::path& path, const RingLayout& layout) {
  const auto bytes = slurp(path);
  if (bytes.size() % kScanRecordBytes != 0) {
    throw FormatError(path.string() + ": size " + std::to_string(bytes.size()) +
                      " is not a multiple of 16 bytes");
  }
  ScanRead out;
  out.report.records = bytes.size() / kScanRecordBytes;
  out.cloud.reserve(out.report.records);
  for (std::size_t r = 0; r < out.report.records; ++r) {
    std::array<float, 4> q;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::uint32_t bits = read_le32(bytes.data() + r * kScanRecordBytes + k * 4);
      q[k] = std::bit_cast<float>(bits);
    }
    if (!std::isfinite(q[0]) || !std::isfinite(q[1]) || !std::isfinite(q[2])) {
      ++out.report.skipped_nonfinite;
      continue;
    }
    float intensity = std::isfinite(q[3]) ? q[3] : 0.0f;
    if (!(intensity >= 0.0f && intensity <= 1.0f)) {
      intensity = std::clamp(intensity, 0.0f, 1.0f);
      ++out.report.clamped_intensity;
    }
    out.cloud.push_back(q[0], q[1], q[2], intensity);
  }
  auto rings = infer_rings(out.cloud, layout);
  out.cloud.ring = std::move(rings.rings);
  out.report.degenerate_rings = rings.degenerate;
  return out;
}

PointCloud load_scan(const std::filesystem::path& path, const RingLayout& layout) {
  return read_scan(path, layout).cloud;
}

void write_scan(const PointCloud& cloud, const std::filesystem::path& path) {
  if (!cloud.consistent()) throw ContractViolation("write_scan: inconsistent cloud columns");
  auto out = open_for_write(path, true);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    write_le32(out, std::bit_cast<std::uint32_t>(cloud.x[i]));
    write_le32(out, std::bit_cast<std::uint32_t>(cloud.y[i]));
    write_le32(out, std::bit_cast<std::uint32_t>(cloud.z[i]));
    write_le32(out, std::bit_cast<std::uint32_t>(cloud.intensity[i]));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

LabelSet load_labels(const std::filesystem::path& path, const PointCloud& cloud) {
  const auto bytes = slurp(path);
  if (bytes.size() != cloud.size() * kLabelRecordBytes) {
    throw FormatError(path.string() + ": " + std::to_string(bytes.size() / kLabelRecordBytes) +
                      " label records for a cloud of " + std::to_string(cloud.size()) + " points");
  }
  LabelSet labels;
  labels.semantic.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    labels.semantic[i] = static_cast<std::uint16_t>(read_le32(bytes.data() + i * kLabelRecordBytes) & 0xFFFFu);
  }
  return labels;
}

void write_labels(const LabelSet& labels, const std::filesystem::path& path) {
  auto out = open_for_write(path, true);
  for (const auto id : labels.semantic) write_le32(out, id);
  if (!out) throw IoError("write failed: " + path.string());
}

void write_classes(const PointClassification& classes, const std::filesystem::path& path) {
  auto out = open_for_write(path, true);
  for (const auto c : classes) out.put(static_cast<char>(c));
  if (!out) throw IoError("write failed: " + path.string());
}

PointClassification load_classes(const std::filesystem::path& path, std::size_t expected_points) {
  const auto bytes = slurp(path);
  if (bytes.size() != expected_points) {
    throw FormatError(path.string() + ": " + std::to_string(bytes.size()) + " class bytes for " +
                      std::to_string(expected_points) + " points");
  }
  PointClassification classes(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const auto b = static_cast<std::uint8_t>(bytes[i]);
    if (b > 2) throw FormatError(path.string() + ": invalid class byte " + std::to_string(b));
    classes[i] = static_cast<PointClass>(b);
  }
  return classes;
}

namespace {

struct Rgb {
  int r, g, b;
};

constexpr Rgb kGreen{0, 255, 0};
constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kBlue{0, 0, 255};
constexpr Rgb kGray{160, 160, 160};
constexpr Rgb kDarkGray{64, 64, 64};

Rgb color_for(PointClass predicted, const LabelSet* labels, const GroundClassMap& mapping, std::size_t i) {
  if (labels == nullptr) {
    switch (predicted) {
      case PointClass::Ground: return kGreen;
      case PointClass::Noise: return kRed;
      case PointClass::NonGround: return kGray;
    }
    return kGray;
  }
  const auto id = labels->semantic[i];
  if (mapping.is_excluded(id)) return kDarkGray;
  const bool truth = mapping.is_ground(id);
  const bool pred = predicted == PointClass::Ground;
  if (pred && truth) return kGreen;
  if (pred && !truth) return kRed;
  if (!pred && truth) return kBlue;
  return kGray;
}

}  // namespace

void export_ply(const PointCloud& cloud, const PointClassification& classes, const LabelSet* labels,
                const GroundClassMap& mapping, const std::filesystem::path& path) {
  if (classes.size() != cloud.size()) throw ContractViolation("export_ply: classes not aligned with cloud");
  if (labels != nullptr && labels->size() != cloud.size()) {
    throw ContractViolation("export_ply: labels not aligned with cloud");
  }
  auto out = open_for_write(path, false);
  out << "ply\nformat ascii 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";
  std::ostringstream line;
  line.precision(9);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Rgb c = color_for(classes[i], labels, mapping, i);
    line.str({});
    line << cloud.x[i] << ' ' << cloud.y[i] << ' ' << cloud.z[i] << ' ' << c.r << ' ' << c.g << ' ' << c.b
         << '\n';
    out << line.str();
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void export_ply(const PointCloud& cloud, const PointClassification& classes, const std::filesystem::path& path) {
  export_ply(cloud, classes, nullptr, GroundClassMap{}, path);
}

}  // namespace groundseg
