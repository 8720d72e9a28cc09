#pragma once

// Reference implementations used only by tests. They favour obviously
// correct, slow arithmetic over anything the library does.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "groundseg/classes.hpp"
#include "groundseg/czm.hpp"
#include "groundseg/eval.hpp"
#include "groundseg/point_cloud.hpp"

namespace groundseg::oracle {

struct Eigen3 {
  std::array<double, 3> values;               // descending
  std::array<Eigen::Vector3d, 3> vectors;     // unit, matching values
};

/// Cyclic Jacobi rotations in long double until the off-diagonal mass is
/// negligible.
Eigen3 jacobi_eigen(const Eigen::Matrix3d& a);

/// Two-pass population covariance accumulated in long double.
Eigen::Matrix3d covariance(std::span<const Eigen::Vector3d> points, Eigen::Vector3d* mean = nullptr);

/// mean + gain * population stdev, evaluated term by term in long double.
double gated(std::span<const double> values, double gain);

/// Bin address by linear zone scan, or nullopt for overflow.
std::optional<BinIndex> bin_of(double x, double y, const ZoneConfig& cfg);

/// Per-point cross-tabulation of predictions against labels.
FrameMetrics crosstab(const PointClassification& classes, const LabelSet& labels, const GroundClassMap& map);

}  // namespace groundseg::oracle
