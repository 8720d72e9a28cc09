#include "groundseg/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

/// Platform-independent draws on top of mt19937_64, so a seed yields the
/// same bytes with any standard library.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return std::min(n - 1, static_cast<int>(uniform() * n)); }

  double normal(double sigma) {
    if (sigma <= 0.0) return 0.0;
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

struct Ray {
  double dx, dy, dz;
};

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  std::uint16_t semantic = 0;
  bool ground = false;
  double height_rate = -1.0;  ///< d(height above surface)/dt, ground hits only
};

class SceneCaster {
 public:
  explicit SceneCaster(const SceneSpec& spec) : spec_(spec), slope_(std::tan(spec.pitch_deg * kDegToRad)) {}

  double ground_height(double x, double y) const {
    const double base = -spec_.sensor_height;
    switch (spec_.shape) {
      case GroundShape::Flat: return base;
      case GroundShape::Sloped: return base + slope_ * std::max(0.0, x - spec_.slope_start);
      case GroundShape::Terrace: return std::hypot(x, y) < spec_.step_radius ? base : base + spec_.wall_height;
    }
    return base;
  }

  std::optional<Hit> ground_hit(const Ray& d) const {
    const double h = spec_.sensor_height;
    Hit hit;
    switch (spec_.shape) {
      case GroundShape::Flat:
        if (d.dz >= 0.0) return std::nullopt;
        hit = {-h / d.dz, spec_.ground_semantic, true, d.dz};
        return hit;
      case GroundShape::Sloped: {
        const double x0 = spec_.slope_start;
        if (d.dz < 0.0 && (-h / d.dz) * d.dx <= x0) {
          hit = {-h / d.dz, spec_.ground_semantic, true, d.dz};
          return hit;
        }
        // ramp z = -h + s (x - x0), only where x >= x0
        const double rate = d.dz - slope_ * d.dx;
        if (rate >= 0.0) return std::nullopt;
        const double t = (-h - slope_ * x0) / rate;
        if (!(t > 0.0) || t * d.dx < x0) return std::nullopt;
        hit = {t, spec_.ground_semantic, true, rate};
        return hit;
      }
      case GroundShape::Terrace: {
        const double rho = std::hypot(d.dx, d.dy);
        if (d.dz < 0.0 && (-h / d.dz) * rho < spec_.step_radius) {
          hit = {-h / d.dz, spec_.ground_semantic, true, d.dz};
          return hit;
        }
        if (rho <= 0.0) return std::nullopt;
        const double top = -h + spec_.wall_height;
        const double t_wall = spec_.step_radius / rho;
        if (t_wall * d.dz <= top) {
          hit = {t_wall, spec_.wall_semantic, false, 0.0};
          return hit;
        }
        if (d.dz < 0.0 && top < 0.0) {
          hit = {top / d.dz, spec_.upper_semantic, true, d.dz};
          return hit;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<double> box_hit(const SceneBox& box, const Ray& d) const {
    const double c = std::cos(box.yaw), s = std::sin(box.yaw);
    // ray in the box frame; the sensor sits at the world origin
    const double ox = c * (-box.x) + s * (-box.y);
    const double oy = -s * (-box.x) + c * (-box.y);
    const double rx = c * d.dx + s * d.dy;
    const double ry = -s * d.dx + c * d.dy;
    const double bottom = ground_height(box.x, box.y) + box.clearance;
    const double lo[3] = {-box.length / 2, -box.width / 2, bottom};
    const double hi[3] = {box.length / 2, box.width / 2, bottom + box.height};
    const double o[3] = {ox, oy, 0.0};
    const double r[3] = {rx, ry, d.dz};
    double t_in = 0.0, t_out = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      if (std::abs(r[k]) < 1e-15) {
        if (o[k] < lo[k] || o[k] > hi[k]) return std::nullopt;
        continue;
      }
      double t0 = (lo[k] - o[k]) / r[k], t1 = (hi[k] - o[k]) / r[k];
      if (t0 > t1) std::swap(t0, t1);
      t_in = std::max(t_in, t0);
      t_out = std::min(t_out, t1);
      if (t_in > t_out) return std::nullopt;
    }
    if (t_in <= 0.0) return std::nullopt;
    return t_in;
  }

 private:
  const SceneSpec& spec_;
  double slope_;
};

Ray ray_for(const RingLayout& rings, int ring, double azimuth) {
  const double phi = rings.ring_center_deg(ring) * kDegToRad;
  return {std::cos(phi) * std::cos(azimuth), std::cos(phi) * std::sin(azimuth), std::sin(phi)};
}

}  // namespace

void SceneSpec::validate() const {
  rings.validate();
  if (!(sensor_height > 0.0)) throw ContractViolation("scene: sensor height must be > 0");
  if (!(wall_height >= 0.0)) throw ContractViolation("scene: wall height must be >= 0");
  if (!(slope_start >= 0.0)) throw ContractViolation("scene: slope start must be >= 0");
  if (!(step_radius > 0.0)) throw ContractViolation("scene: step radius must be > 0");
  if (!(std::abs(pitch_deg) < 60.0)) throw ContractViolation("scene: pitch must be within +/-60 degrees");
  if (columns < 0) throw ContractViolation("scene: density (columns) must be >= 0");
  if (!(max_range > 0.0)) throw ContractViolation("scene: max range must be > 0");
  if (roughness < 0.0 || range_noise < 0.0) throw ContractViolation("scene: noise levels must be >= 0");
  if (!(ground_intensity_min >= 0.0 && ground_intensity_min <= ground_intensity_max && ground_intensity_max <= 1.0) ||
      !(object_intensity_min >= 0.0 && object_intensity_min <= object_intensity_max && object_intensity_max <= 1.0)) {
    throw ContractViolation("scene: intensity ranges must lie in [0, 1]");
  }
  if (random_boxes < 0 || !(random_box_min_range >= 0.0 && random_box_min_range <= random_box_max_range)) {
    throw ContractViolation("scene: bad random box placement");
  }
  for (const auto& b : boxes) {
    if (!(b.length > 0.0 && b.width > 0.0 && b.height > 0.0) || b.clearance < 0.0) {
      throw ContractViolation("scene: box extents must be > 0");
    }
  }
  if (noise.count < 0 || noise.max_ring < 1 || noise.max_ring > rings.num_rings ||
      !(noise.intensity_max > 0.0 && noise.intensity_max <= 1.0) ||
      !(noise.drop_min >= 0.0 && noise.drop_min <= noise.drop_max)) {
    throw ContractViolation("scene: bad noise injection parameters");
  }
}

Scene generate_scene(const SceneSpec& input, std::uint64_t seed) {
  input.validate();
  Scene scene;
  if (input.columns == 0) {
    scene.warnings.emplace_back("scene density is zero; generated an empty cloud");
    return scene;
  }

  Sampler rng(seed);
  SceneSpec spec = input;
  for (int i = 0; i < input.random_boxes; ++i) {
    SceneBox box;
    const double range = rng.uniform(spec.random_box_min_range, spec.random_box_max_range);
    const double az = rng.uniform(0.0, 2.0 * std::numbers::pi);
    box.x = range * std::cos(az);
    box.y = range * std::sin(az);
    box.yaw = rng.uniform(0.0, std::numbers::pi);
    box.length = rng.uniform(3.8, 4.8);
    box.width = rng.uniform(1.6, 2.0);
    box.height = rng.uniform(1.3, 1.7);
    spec.boxes.push_back(box);
  }
  const SceneCaster caster(spec);

  const auto rays = static_cast<std::size_t>(spec.rings.num_rings) * spec.columns;
  scene.cloud.reserve(rays + spec.noise.count);
  scene.labels.semantic.reserve(rays + spec.noise.count);

  for (int ring = 0; ring < spec.rings.num_rings; ++ring) {
    for (int col = 0; col < spec.columns; ++col) {
      const double azimuth = 2.0 * std::numbers::pi * (col + 0.5) / spec.columns;
      const Ray d = ray_for(spec.rings, ring, azimuth);
      Hit best;
      if (auto g = caster.ground_hit(d)) best = *g;
      for (const auto& box : spec.boxes) {
        if (auto t = caster.box_hit(box, d); t && *t < best.t) best = {*t, box.semantic, false, 0.0};
      }
      if (!std::isfinite(best.t)) continue;

      double t = best.t;
      if (best.ground && spec.roughness > 0.0) t += rng.normal(spec.roughness) / std::abs(best.height_rate);
      t += rng.normal(spec.range_noise);
      if (!(t > 0.0) || t > spec.max_range) continue;

      const double intensity = best.ground ? rng.uniform(spec.ground_intensity_min, spec.ground_intensity_max)
                                           : rng.uniform(spec.object_intensity_min, spec.object_intensity_max);
      scene.cloud.push_back(static_cast<float>(t * d.dx), static_cast<float>(t * d.dy), static_cast<float>(t * d.dz),
                            static_cast<float>(intensity), static_cast<std::uint16_t>(ring));
      scene.labels.semantic.push_back(best.semantic);
    }
  }

  // Virtual points behind the true ground along bottom-ring rays.
  int placed = 0;
  int attempts = 0;
  while (placed < spec.noise.count && attempts < 100 * (spec.noise.count + 1)) {
    ++attempts;
    const int ring = rng.index(spec.noise.max_ring);
    const double azimuth = 2.0 * std::numbers::pi * (rng.index(spec.columns) + 0.5) / spec.columns;
    const Ray d = ray_for(spec.rings, ring, azimuth);
    const auto g = caster.ground_hit(d);
    if (!g || !g->ground || d.dz >= 0.0) continue;
    const double z_hit = g->t * d.dz;
    const double z = std::min(z_hit - rng.uniform(spec.noise.drop_min, spec.noise.drop_max), spec.noise.z_ceiling);
    const double t = z / d.dz;
    if (t > spec.max_range) continue;
    const double intensity = rng.uniform(0.0, spec.noise.intensity_max);
    scene.cloud.push_back(static_cast<float>(t * d.dx), static_cast<float>(t * d.dy), static_cast<float>(t * d.dz),
                          static_cast<float>(intensity), static_cast<std::uint16_t>(ring));
    scene.labels.semantic.push_back(semantic::kOutlier);
    ++placed;
  }
  if (placed < spec.noise.count) {
    scene.warnings.push_back("placed " + std::to_string(placed) + " of " + std::to_string(spec.noise.count) +
                             " noise points");
  }
  return scene;
}

SceneSpec scene_preset(const std::string& name) {
  SceneSpec s;
  s.random_boxes = 8;
  if (name == "flat") return s;
  if (name == "sloped") {
    s.shape = GroundShape::Sloped;
    s.pitch_deg = 10.0;
    s.slope_start = 7.6;
    return s;
  }
  if (name == "downhill") {
    s.shape = GroundShape::Sloped;
    s.pitch_deg = -12.0;
    s.slope_start = 7.6;
    s.random_boxes = 0;
    s.noise.count = 200;
    return s;
  }
  if (name == "terrace") {
    s.shape = GroundShape::Terrace;
    s.random_boxes = 4;
    s.random_box_min_range = 14.0;  // keep boxes off the step
    return s;
  }
  if (name == "noisy") {
    s.shape = GroundShape::Sloped;
    s.pitch_deg = 4.0;
    s.slope_start = 7.6;
    s.noise.count = 300;
    return s;
  }
  if (name == "rough") {
    s.roughness = 0.05;
    s.ground_semantic = semantic::kTerrain;
    return s;
  }
  throw ContractViolation("unknown scene preset: " + name);
}

}  // namespace groundseg
