#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "groundseg/cloud_io.hpp"
#include "groundseg/point_cloud.hpp"

namespace groundseg {

enum class GroundShape {
  Flat,
  Sloped,   ///< flat up to x = slope_start, then a ramp of pitch_deg (positive rises towards +x)
  Terrace,  ///< circular step: lower level inside step_radius, wall, upper level outside
};

/// Yawed box standing on the ground surface below its center.
struct SceneBox {
  double x = 0.0;
  double y = 0.0;
  double length = 4.2;
  double width = 1.8;
  double height = 1.5;
  double yaw = 0.0;
  double clearance = 0.2;  ///< gap between ground and the box bottom
  std::uint16_t semantic = semantic::kCar;
};

/// Sub-ground points along bottom-ring rays, mimicking specular reflections.
struct NoiseInjection {
  int count = 0;
  int max_ring = 12;             ///< rays drawn from rings [0, max_ring)
  double intensity_max = 0.15;   ///< intensity ~ U[0, intensity_max)
  double drop_min = 0.9;         ///< meters below the true ground hit
  double drop_max = 1.8;
  double z_ceiling = -2.6;       ///< noise z never exceeds this
};

struct SceneSpec {
  GroundShape shape = GroundShape::Flat;
  double sensor_height = 1.723;  ///< ground lies at z = -sensor_height under the sensor
  double pitch_deg = 0.0;        ///< Sloped only
  double slope_start = 0.0;      ///< Sloped only, x where the ramp begins (>= 0)
  double step_radius = 7.55;     ///< Terrace only, meters
  double wall_height = 0.8;      ///< Terrace only, meters
  double roughness = 0.0;        ///< stddev of ground height perturbation, meters
  std::uint16_t ground_semantic = semantic::kRoad;
  std::uint16_t upper_semantic = semantic::kSidewalk;
  std::uint16_t wall_semantic = semantic::kBuilding;

  std::vector<SceneBox> boxes;
  int random_boxes = 0;          ///< extra boxes placed per seed
  double random_box_min_range = 6.0;
  double random_box_max_range = 35.0;

  NoiseInjection noise;

  RingLayout rings;
  int columns = 2048;            ///< azimuth samples per ring (density)
  double max_range = 80.0;
  double range_noise = 0.01;     ///< stddev along the ray, meters
  double ground_intensity_min = 0.3;
  double ground_intensity_max = 0.8;
  double object_intensity_min = 0.2;
  double object_intensity_max = 0.9;

  /// Throws ContractViolation for inconsistent geometry.
  void validate() const;
};

struct Scene {
  PointCloud cloud;
  LabelSet labels;
  std::vector<std::string> warnings;
};

/// Ray-casts the scene from a sensor at the origin. Deterministic for a
/// fixed seed; every point carries its analytic label (ground class,
/// non-ground class, or semantic::kOutlier for injected noise).
Scene generate_scene(const SceneSpec& spec, std::uint64_t seed);

/// Named scenes used by the CLI and the test suites: flat, sloped, downhill,
/// terrace, noisy, rough.
SceneSpec scene_preset(const std::string& name);

}  // namespace groundseg
