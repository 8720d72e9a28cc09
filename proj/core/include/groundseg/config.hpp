#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "groundseg/classes.hpp"
#include "groundseg/cloud_io.hpp"
#include "groundseg/pipeline.hpp"
#include "groundseg/scene.hpp"

namespace groundseg {

/// Flat `section.key = value` text. `#` starts a comment; blank lines are
/// ignored. Later keys override earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

/// Everything a run needs besides its inputs.
struct RunConfig {
  PipelineConfig pipeline;
  RingLayout rings;
  GroundClassMap classes;
  int ransac_iterations = 200;
  double ransac_dist_thr = 0.2;
};

/// Applies recognised keys on top of defaults. Unknown keys or bad values
/// throw FormatError; the result is validated.
RunConfig config_from_key_values(const KeyValues& kv);
RunConfig load_config(const std::filesystem::path& path);

/// Full snapshot of every key, suitable for reproducing a run.
KeyValues to_key_values(const RunConfig& cfg);

SceneSpec scene_from_key_values(const KeyValues& kv);
KeyValues to_key_values(const SceneSpec& spec);

}  // namespace groundseg
