#include <algorithm>
#include <cstdio>

#include "groundseg/cli.hpp"
#include "groundseg/error.hpp"

namespace groundseg::cli {

std::vector<std::filesystem::path> list_scans(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> scans;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") scans.push_back(entry.path());
  }
  std::sort(scans.begin(), scans.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return scans;
}

std::string frame_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

}  // namespace groundseg::cli
