#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "groundseg/czm.hpp"
#include "groundseg/point_cloud.hpp"

namespace groundseg {

/// PCA plane of a point set. `normal` is the unit eigenvector of the smallest
/// eigenvalue, oriented so normal.z >= 0 (ties broken by x, then y).
struct PlaneEstimate {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  std::array<double, 3> eigenvalues{0.0, 0.0, 0.0};  ///< descending, m^2
  double elevation = 0.0;                            ///< mean z of the inliers
  double flatness = 0.0;                             ///< smallest eigenvalue
  std::vector<PointId> inliers;
  BinIndex bin;

  double uprightness() const { return normal.z(); }
};

struct SymmetricEigen3 {
  std::array<double, 3> values;        ///< descending
  std::array<Eigen::Vector3d, 3> vectors;  ///< unit, matching `values`
};

/// Closed-form eigen-decomposition of a symmetric 3x3 matrix.
SymmetricEigen3 eigen_symmetric3(const Eigen::Matrix3d& a);

/// Population covariance (divided by n) PCA. Throws DegenerateFitError for
/// fewer than three points or a covariance of rank < 2.
PlaneEstimate pca_plane(std::span<const Eigen::Vector3d> points);
PlaneEstimate pca_plane(const PointCloud& cloud, std::span<const PointId> ids);

struct VpfParams {
  double distance_margin = 0.1;  ///< meters
  double angle_margin = 0.707;   ///< radians
  int iterations = 3;
  int num_seed = 20;

  void validate() const;
};

struct GpfParams {
  int num_lpr = 20;
  double seed_margin = 0.3;  ///< meters
  int num_iter = 3;
  double dist_thr = 0.125;   ///< meters
  double sensor_height = 1.723;

  /// Points at or below this height never enter the lowest-point average.
  double seed_floor() const { return -(sensor_height + 0.8); }
  void validate() const;
};

/// Seeds of a z-sorted id list: the average height of the `num_lpr` lowest
/// points above `floor_z` anchors a band of width `seed_margin`; every point
/// below the band's top is a seed. Empty when no point is above the floor.
std::vector<PointId> extract_seeds(const PointCloud& cloud, std::span<const PointId> sorted_ids,
                                   int num_lpr, double seed_margin, double floor_z);
std::vector<PointId> extract_seeds(const PointCloud& cloud, std::span<const PointId> sorted_ids,
                                   const GpfParams& params);

/// Angle between the plane and the vertical axis is below the margin, i.e.
/// pi/2 - acos(normal.z) < angle_margin.
bool is_vertical_plane(const Eigen::Vector3d& normal, double angle_margin);

struct VerticalSplit {
  std::vector<PointId> vertical;   ///< union over iterations
  std::vector<PointId> remaining;  ///< input minus vertical, z order kept
  std::vector<std::vector<PointId>> per_iteration;
};

/// Region-wise vertical plane fitting over a z-sorted id list.
VerticalSplit r_vpf(const PointCloud& cloud, std::span<const PointId> sorted_ids,
                    const VpfParams& vpf, const GpfParams& gpf);

enum class FitStatus {
  Ok,
  TooFewPoints,
  NoSeeds,
  Degenerate,
};

struct GroundFit {
  FitStatus status = FitStatus::TooFewPoints;
  PlaneEstimate plane;             ///< valid when status == Ok
  std::vector<PointId> outliers;   ///< remaining points not in plane.inliers

  bool ok() const { return status == FitStatus::Ok; }
};

/// Region-wise ground plane fitting. `sorted_ids` must be z-sorted and hold
/// at least `min_points` (and 3) points, else TooFewPoints.
GroundFit r_gpf(const PointCloud& cloud, const BinIndex& bin, std::span<const PointId> sorted_ids,
                const GpfParams& params, std::size_t min_points = 3);

}  // namespace groundseg
