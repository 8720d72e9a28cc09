#include "groundseg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw FormatError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw FormatError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  if (out.empty()) throw FormatError("config key '" + key + "': empty list");
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<int>(to_int(key, item)));
  if (out.empty()) throw FormatError("config key '" + key + "': empty list");
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string str(bool b) { return b ? "true" : "false"; }

using Setter = std::function<void(const std::string& key, const std::string& value)>;

void apply(const KeyValues& kv, const std::map<std::string, Setter>& setters, const char* what) {
  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw FormatError(std::string("unknown ") + what + " key '" + key + "'");
    it->second(key, value);
  }
}

GroundShape to_shape(const std::string& key, const std::string& v) {
  if (v == "flat") return GroundShape::Flat;
  if (v == "sloped") return GroundShape::Sloped;
  if (v == "terrace") return GroundShape::Terrace;
  throw FormatError("config key '" + key + "': expected flat, sloped or terrace, got '" + v + "'");
}

std::string shape_name(GroundShape s) {
  switch (s) {
    case GroundShape::Flat: return "flat";
    case GroundShape::Sloped: return "sloped";
    case GroundShape::Terrace: return "terrace";
  }
  return "flat";
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

RunConfig config_from_key_values(const KeyValues& kv) {
  RunConfig c;
  auto& p = c.pipeline;
  const std::map<std::string, Setter> setters{
      {"czm.num_rings", [&](auto& k, auto& v) { p.zones.ring_counts = to_ints(k, v); }},
      {"czm.num_sectors", [&](auto& k, auto& v) { p.zones.sector_counts = to_ints(k, v); }},
      {"czm.boundaries", [&](auto& k, auto& v) { p.zones.boundaries = to_doubles(k, v); }},
      {"czm.min_points_per_bin",
       [&](auto& k, auto& v) { p.zones.min_points_per_bin = static_cast<std::size_t>(std::max(0LL, to_int(k, v))); }},
      {"rnr.enable", [&](auto& k, auto& v) { p.enable_rnr = to_bool(k, v); }},
      {"rnr.num_rings", [&](auto& k, auto& v) { p.rnr.num_rings = static_cast<int>(to_int(k, v)); }},
      {"rnr.intensity_thr", [&](auto& k, auto& v) { p.rnr.intensity_thr = to_double(k, v); }},
      {"rnr.init_height_thr", [&](auto& k, auto& v) { p.rnr.height_thr = to_double(k, v); }},
      {"vpf.enable", [&](auto& k, auto& v) { p.enable_rvpf = to_bool(k, v); }},
      {"vpf.distance_margin", [&](auto& k, auto& v) { p.vpf.distance_margin = to_double(k, v); }},
      {"vpf.angle_margin", [&](auto& k, auto& v) { p.vpf.angle_margin = to_double(k, v); }},
      {"vpf.iterations", [&](auto& k, auto& v) { p.vpf.iterations = static_cast<int>(to_int(k, v)); }},
      {"vpf.num_seed", [&](auto& k, auto& v) { p.vpf.num_seed = static_cast<int>(to_int(k, v)); }},
      {"gpf.num_lpr", [&](auto& k, auto& v) { p.gpf.num_lpr = static_cast<int>(to_int(k, v)); }},
      {"gpf.seed_margin", [&](auto& k, auto& v) { p.gpf.seed_margin = to_double(k, v); }},
      {"gpf.num_iter", [&](auto& k, auto& v) { p.gpf.num_iter = static_cast<int>(to_int(k, v)); }},
      {"gpf.dist_thr", [&](auto& k, auto& v) { p.gpf.dist_thr = to_double(k, v); }},
      {"gpf.sensor_height", [&](auto& k, auto& v) { p.gpf.sensor_height = to_double(k, v); }},
      {"gle.uprightness_thr", [&](auto& k, auto& v) { p.gle.uprightness_thr = to_double(k, v); }},
      {"gle.adaptive_ring_count", [&](auto& k, auto& v) { p.gle.adaptive_rings = static_cast<int>(to_int(k, v)); }},
      {"gle.a", [&](auto& k, auto& v) { p.gle.elevation_gain = to_doubles(k, v); }},
      {"gle.b", [&](auto& k, auto& v) { p.gle.flatness_gain = to_doubles(k, v); }},
      {"gle.c", [&](auto& k, auto& v) { p.gle.revert_gain = to_doubles(k, v); }},
      {"gle.delta", [&](auto& k, auto& v) { p.gle.noise_margin = to_double(k, v); }},
      {"gle.sample_stdev",
       [&](auto& k, auto& v) { p.gle.stdev = to_bool(k, v) ? StdevKind::Sample : StdevKind::Population; }},
      {"gle.history_cap",
       [&](auto& k, auto& v) { p.gle.history_cap = static_cast<std::size_t>(std::max(0LL, to_int(k, v))); }},
      {"gle.freeze", [&](auto& k, auto& v) { p.freeze_thresholds = to_bool(k, v); }},
      {"tgr.enable", [&](auto& k, auto& v) { p.enable_tgr = to_bool(k, v); }},
      {"pipeline.parallelism", [&](auto& k, auto& v) { p.parallelism = static_cast<int>(to_int(k, v)); }},
      {"rings.num_rings", [&](auto& k, auto& v) { c.rings.num_rings = static_cast<int>(to_int(k, v)); }},
      {"rings.fov_down", [&](auto& k, auto& v) { c.rings.fov_down_deg = to_double(k, v); }},
      {"rings.fov_up", [&](auto& k, auto& v) { c.rings.fov_up_deg = to_double(k, v); }},
      {"eval.ground_ids",
       [&](auto& k, auto& v) {
         c.classes.ground.clear();
         for (int id : to_ints(k, v)) c.classes.ground.push_back(static_cast<std::uint16_t>(id));
       }},
      {"eval.excluded_ids",
       [&](auto& k, auto& v) {
         c.classes.excluded.clear();
         for (const auto& item : split_list(v)) c.classes.excluded.push_back(static_cast<std::uint16_t>(to_int(k, item)));
       }},
      {"ransac.iterations", [&](auto& k, auto& v) { c.ransac_iterations = static_cast<int>(to_int(k, v)); }},
      {"ransac.dist_thr", [&](auto& k, auto& v) { c.ransac_dist_thr = to_double(k, v); }},
  };
  apply(kv, setters, "config");
  try {
    p.validate();
    c.rings.validate();
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("invalid config: ") + e.what());
  }
  if (c.ransac_iterations < 1 || !(c.ransac_dist_thr > 0.0)) throw FormatError("invalid config: ransac parameters");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_key_values(read_key_values(path)); }

KeyValues to_key_values(const RunConfig& c) {
  const auto& p = c.pipeline;
  std::vector<int> ground(c.classes.ground.begin(), c.classes.ground.end());
  std::vector<int> excluded(c.classes.excluded.begin(), c.classes.excluded.end());
  return {
      {"czm.num_rings", join(p.zones.ring_counts)},
      {"czm.num_sectors", join(p.zones.sector_counts)},
      {"czm.boundaries", join(p.zones.boundaries)},
      {"czm.min_points_per_bin", std::to_string(p.zones.min_points_per_bin)},
      {"rnr.enable", str(p.enable_rnr)},
      {"rnr.num_rings", std::to_string(p.rnr.num_rings)},
      {"rnr.intensity_thr", fmt(p.rnr.intensity_thr)},
      {"rnr.init_height_thr", fmt(p.rnr.height_thr)},
      {"vpf.enable", str(p.enable_rvpf)},
      {"vpf.distance_margin", fmt(p.vpf.distance_margin)},
      {"vpf.angle_margin", fmt(p.vpf.angle_margin)},
      {"vpf.iterations", std::to_string(p.vpf.iterations)},
      {"vpf.num_seed", std::to_string(p.vpf.num_seed)},
      {"gpf.num_lpr", std::to_string(p.gpf.num_lpr)},
      {"gpf.seed_margin", fmt(p.gpf.seed_margin)},
      {"gpf.num_iter", std::to_string(p.gpf.num_iter)},
      {"gpf.dist_thr", fmt(p.gpf.dist_thr)},
      {"gpf.sensor_height", fmt(p.gpf.sensor_height)},
      {"gle.uprightness_thr", fmt(p.gle.uprightness_thr)},
      {"gle.adaptive_ring_count", std::to_string(p.gle.adaptive_rings)},
      {"gle.a", join(p.gle.elevation_gain)},
      {"gle.b", join(p.gle.flatness_gain)},
      {"gle.c", join(p.gle.revert_gain)},
      {"gle.delta", fmt(p.gle.noise_margin)},
      {"gle.sample_stdev", str(p.gle.stdev == StdevKind::Sample)},
      {"gle.history_cap", std::to_string(p.gle.history_cap)},
      {"gle.freeze", str(p.freeze_thresholds)},
      {"tgr.enable", str(p.enable_tgr)},
      {"pipeline.parallelism", std::to_string(p.parallelism)},
      {"rings.num_rings", std::to_string(c.rings.num_rings)},
      {"rings.fov_down", fmt(c.rings.fov_down_deg)},
      {"rings.fov_up", fmt(c.rings.fov_up_deg)},
      {"eval.ground_ids", join(ground)},
      {"eval.excluded_ids", join(excluded)},
      {"ransac.iterations", std::to_string(c.ransac_iterations)},
      {"ransac.dist_thr", fmt(c.ransac_dist_thr)},
  };
}

SceneSpec scene_from_key_values(const KeyValues& kv) {
  SceneSpec s;
  if (const auto it = kv.find("scene.preset"); it != kv.end()) {
    try {
      s = scene_preset(it->second);
    } catch (const ContractViolation& e) {
      throw FormatError(std::string("config key 'scene.preset': ") + e.what());
    }
  }
  std::map<std::string, Setter> setters{
      {"scene.preset", [](auto&, auto&) {}},
      {"scene.shape", [&](auto& k, auto& v) { s.shape = to_shape(k, v); }},
      {"scene.sensor_height", [&](auto& k, auto& v) { s.sensor_height = to_double(k, v); }},
      {"scene.pitch_deg", [&](auto& k, auto& v) { s.pitch_deg = to_double(k, v); }},
      {"scene.slope_start", [&](auto& k, auto& v) { s.slope_start = to_double(k, v); }},
      {"scene.step_radius", [&](auto& k, auto& v) { s.step_radius = to_double(k, v); }},
      {"scene.wall_height", [&](auto& k, auto& v) { s.wall_height = to_double(k, v); }},
      {"scene.roughness", [&](auto& k, auto& v) { s.roughness = to_double(k, v); }},
      {"scene.ground_semantic",
       [&](auto& k, auto& v) { s.ground_semantic = static_cast<std::uint16_t>(to_int(k, v)); }},
      {"scene.random_boxes", [&](auto& k, auto& v) { s.random_boxes = static_cast<int>(to_int(k, v)); }},
      {"scene.random_box_min_range", [&](auto& k, auto& v) { s.random_box_min_range = to_double(k, v); }},
      {"scene.random_box_max_range", [&](auto& k, auto& v) { s.random_box_max_range = to_double(k, v); }},
      {"scene.boxes",
       [&](auto& k, auto& v) {
         // x,y,length,width,height,yaw;...
         s.boxes.clear();
         for (const auto& spec : split_list(v, ';')) {
           const auto f = to_doubles(k, spec);
           if (f.size() != 6) throw FormatError("config key '" + k + "': each box needs 6 numbers");
           SceneBox b;
           b.x = f[0];
           b.y = f[1];
           b.length = f[2];
           b.width = f[3];
           b.height = f[4];
           b.yaw = f[5];
           s.boxes.push_back(b);
         }
       }},
      {"noise.count", [&](auto& k, auto& v) { s.noise.count = static_cast<int>(to_int(k, v)); }},
      {"noise.max_ring", [&](auto& k, auto& v) { s.noise.max_ring = static_cast<int>(to_int(k, v)); }},
      {"noise.intensity_max", [&](auto& k, auto& v) { s.noise.intensity_max = to_double(k, v); }},
      {"noise.drop_min", [&](auto& k, auto& v) { s.noise.drop_min = to_double(k, v); }},
      {"noise.drop_max", [&](auto& k, auto& v) { s.noise.drop_max = to_double(k, v); }},
      {"noise.z_ceiling", [&](auto& k, auto& v) { s.noise.z_ceiling = to_double(k, v); }},
      {"sensor.num_rings", [&](auto& k, auto& v) { s.rings.num_rings = static_cast<int>(to_int(k, v)); }},
      {"sensor.fov_down", [&](auto& k, auto& v) { s.rings.fov_down_deg = to_double(k, v); }},
      {"sensor.fov_up", [&](auto& k, auto& v) { s.rings.fov_up_deg = to_double(k, v); }},
      {"sensor.columns", [&](auto& k, auto& v) { s.columns = static_cast<int>(to_int(k, v)); }},
      {"sensor.max_range", [&](auto& k, auto& v) { s.max_range = to_double(k, v); }},
      {"sensor.range_noise", [&](auto& k, auto& v) { s.range_noise = to_double(k, v); }},
  };
  apply(kv, setters, "scene");
  try {
    s.validate();
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("invalid scene: ") + e.what());
  }
  return s;
}

KeyValues to_key_values(const SceneSpec& s) {
  std::string boxes;
  for (const auto& b : s.boxes) {
    if (!boxes.empty()) boxes += ';';
    boxes += join(std::vector<double>{b.x, b.y, b.length, b.width, b.height, b.yaw});
  }
  KeyValues kv{
      {"scene.shape", shape_name(s.shape)},
      {"scene.sensor_height", fmt(s.sensor_height)},
      {"scene.pitch_deg", fmt(s.pitch_deg)},
      {"scene.slope_start", fmt(s.slope_start)},
      {"scene.step_radius", fmt(s.step_radius)},
      {"scene.wall_height", fmt(s.wall_height)},
      {"scene.roughness", fmt(s.roughness)},
      {"scene.ground_semantic", std::to_string(s.ground_semantic)},
      {"scene.random_boxes", std::to_string(s.random_boxes)},
      {"scene.random_box_min_range", fmt(s.random_box_min_range)},
      {"scene.random_box_max_range", fmt(s.random_box_max_range)},
      {"noise.count", std::to_string(s.noise.count)},
      {"noise.max_ring", std::to_string(s.noise.max_ring)},
      {"noise.intensity_max", fmt(s.noise.intensity_max)},
      {"noise.drop_min", fmt(s.noise.drop_min)},
      {"noise.drop_max", fmt(s.noise.drop_max)},
      {"noise.z_ceiling", fmt(s.noise.z_ceiling)},
      {"sensor.num_rings", std::to_string(s.rings.num_rings)},
      {"sensor.fov_down", fmt(s.rings.fov_down_deg)},
      {"sensor.fov_up", fmt(s.rings.fov_up_deg)},
      {"sensor.columns", std::to_string(s.columns)},
      {"sensor.max_range", fmt(s.max_range)},
      {"sensor.range_noise", fmt(s.range_noise)},
  };
  if (!boxes.empty()) kv["scene.boxes"] = boxes;
  return kv;
}

}  // namespace groundseg
