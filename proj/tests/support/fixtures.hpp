#pragma once

#include <filesystem>
#include <string>

#include "groundseg/point_cloud.hpp"

namespace groundseg::fixture {

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// Regular grid of n x n points on z = height spanning [x0, x0+extent) x [y0, y0+extent).
PointCloud grid(int n, double x0, double y0, double extent, double height, float intensity = 0.5f);

}  // namespace groundseg::fixture
