#include "groundseg/plane_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

// Below this relative size a normal component counts as zero for orientation.
constexpr double kOrientationTie = 1e-12;
// lambda2 / lambda1 below this means the points are (numerically) collinear.
constexpr double kRankTolerance = 1e-12;

/// Unit null vector of the rank-2 matrix `m`, from the largest cross product
/// of its rows. Returns false when `m` has rank < 2.
bool null_vector(const Eigen::Matrix3d& m, Eigen::Vector3d& out) {
  const Eigen::Vector3d r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
  const Eigen::Vector3d c[3] = {r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  int best = 0;
  double best_norm = c[0].squaredNorm();
  for (int i = 1; i < 3; ++i) {
    const double n = c[i].squaredNorm();
    if (n > best_norm) {
      best_norm = n;
      best = i;
    }
  }
  if (best_norm <= 0.0) return false;
  out = c[best] / std::sqrt(best_norm);
  return true;
}

/// Any unit vector orthogonal to `w`, chosen deterministically.
Eigen::Vector3d any_orthogonal(const Eigen::Vector3d& w) {
  Eigen::Vector3d u;
  if (std::abs(w.x()) > std::abs(w.y())) {
    u = Eigen::Vector3d(-w.z(), 0.0, w.x());
  } else {
    u = Eigen::Vector3d(0.0, w.z(), -w.y());
  }
  return u.normalized();
}

/// Eigenvector of `m` for eigenvalue `lambda` inside the plane orthogonal
/// to the known eigenvector `w`.
Eigen::Vector3d eigenvector_in_complement(const Eigen::Matrix3d& m, double lambda, const Eigen::Vector3d& w) {
  const Eigen::Vector3d u = any_orthogonal(w);
  const Eigen::Vector3d v = w.cross(u);
  const Eigen::Matrix3d shifted = m - lambda * Eigen::Matrix3d::Identity();
  const Eigen::Vector3d su = shifted * u;
  const Eigen::Vector3d sv = shifted * v;
  const double m00 = u.dot(su), m01 = u.dot(sv), m11 = v.dot(sv);
  const double a00 = std::abs(m00), a11 = std::abs(m11);
  if (std::max(a00, a11) <= 0.0 && std::abs(m01) <= 0.0) return u;
  if (a00 >= a11) {
    const double len = std::hypot(m00, m01);
    return ((m01 / len) * u - (m00 / len) * v).normalized();
  }
  const double len = std::hypot(m11, m01);
  return ((m11 / len) * u - (m01 / len) * v).normalized();
}

void orient_up(Eigen::Vector3d& n) {
  if (std::abs(n.z()) > kOrientationTie) {
    if (n.z() < 0.0) n = -n;
  } else if (std::abs(n.x()) > kOrientationTie) {
    if (n.x() < 0.0) n = -n;
  } else if (n.y() < 0.0) {
    n = -n;
  }
}

PlaneEstimate plane_from_moments(const Eigen::Vector3d& mean, const Eigen::Matrix3d& cov) {
  const SymmetricEigen3 eig = eigen_symmetric3(cov);
  const double l1 = eig.values[0];
  if (!(l1 > 0.0) || eig.values[1] <= kRankTolerance * l1) {
    throw DegenerateFitError("pca_plane: covariance has rank < 2");
  }
  PlaneEstimate plane;
  plane.mean = mean;
  plane.normal = eig.vectors[2];
  orient_up(plane.normal);
  plane.eigenvalues = eig.values;
  plane.elevation = mean.z();
  plane.flatness = eig.values[2];
  return plane;
}

template <typename PointAt>
PlaneEstimate fit(std::size_t n, PointAt&& at) {
  if (n < 3) throw DegenerateFitError("pca_plane: need at least 3 points");
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) mean += at(i);
  mean /= static_cast<double>(n);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d d = at(i) - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(n);
  return plane_from_moments(mean, cov);
}

double signed_distance(const PointCloud& cloud, PointId id, const PlaneEstimate& plane) {
  return (cloud.point(id) - plane.mean).dot(plane.normal);
}

}  // namespace

SymmetricEigen3 eigen_symmetric3(const Eigen::Matrix3d& input) {
  SymmetricEigen3 out;
  out.vectors = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};

  const double scale = input.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    out.values = {0.0, 0.0, 0.0};
    return out;
  }
  const Eigen::Matrix3d a = input / scale;

  const double q = a.trace() / 3.0;
  const Eigen::Matrix3d c = a - q * Eigen::Matrix3d::Identity();
  const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double p = std::sqrt((c(0, 0) * c(0, 0) + c(1, 1) * c(1, 1) + c(2, 2) * c(2, 2) + 2.0 * off) / 6.0);
  if (p == 0.0) {
    out.values = {input(0, 0), input(1, 1), input(2, 2)};
    return out;
  }
  const double r = std::clamp((c / p).determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double beta1 = 2.0 * std::cos(phi);
  const double beta3 = 2.0 * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double beta2 = -(beta1 + beta3);
  const double l1 = q + p * beta1, l2 = q + p * beta2, l3 = q + p * beta3;

  // Solve the better separated end first, then the middle one in its
  // orthogonal complement.
  Eigen::Vector3d v1, v2, v3;
  if (beta1 - beta2 >= beta2 - beta3) {
    if (!null_vector(a - l1 * Eigen::Matrix3d::Identity(), v1)) v1 = Eigen::Vector3d::UnitX();
    v2 = eigenvector_in_complement(a, l2, v1);
    v3 = v1.cross(v2).normalized();
  } else {
    if (!null_vector(a - l3 * Eigen::Matrix3d::Identity(), v3)) v3 = Eigen::Vector3d::UnitZ();
    v2 = eigenvector_in_complement(a, l2, v3);
    v1 = v2.cross(v3).normalized();
  }

  // Rayleigh quotients are more accurate than the trigonometric roots.
  std::array<std::pair<double, Eigen::Vector3d>, 3> pairs{{
      {v1.dot(input * v1), v1},
      {v2.dot(input * v2), v2},
      {v3.dot(input * v3), v3},
  }};
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (int i = 0; i < 3; ++i) {
    out.values[i] = pairs[i].first;
    out.vectors[i] = pairs[i].second;
  }
  return out;
}

PlaneEstimate pca_plane(std::span<const Eigen::Vector3d> points) {
  return fit(points.size(), [&](std::size_t i) -> const Eigen::Vector3d& { return points[i]; });
}

PlaneEstimate pca_plane(const PointCloud& cloud, std::span<const PointId> ids) {
  PlaneEstimate plane = fit(ids.size(), [&](std::size_t i) { return cloud.point(ids[i]); });
  plane.inliers.assign(ids.begin(), ids.end());
  return plane;
}

void VpfParams::validate() const {
  if (!(distance_margin > 0.0)) throw ContractViolation("vpf: distance margin must be > 0");
  if (!(angle_margin > 0.0 && angle_margin < std::numbers::pi / 2.0)) {
    throw ContractViolation("vpf: angle margin must lie in (0, pi/2)");
  }
  if (iterations < 1) throw ContractViolation("vpf: iterations must be >= 1");
  if (num_seed < 1) throw ContractViolation("vpf: num_seed must be >= 1");
}

void GpfParams::validate() const {
  if (num_lpr < 1 || num_iter < 1) throw ContractViolation("gpf: counts must be >= 1");
  if (!(seed_margin > 0.0) || !(dist_thr > 0.0)) throw ContractViolation("gpf: thresholds must be > 0");
  if (!(sensor_height > 0.0)) throw ContractViolation("gpf: sensor height must be > 0");
}

std::vector<PointId> extract_seeds(const PointCloud& cloud, std::span<const PointId> sorted_ids, int num_lpr,
                                   double seed_margin, double floor_z) {
  std::vector<PointId> seeds;
  std::size_t first = 0;
  while (first < sorted_ids.size() && !(cloud.z[sorted_ids[first]] > floor_z)) ++first;
  if (first == sorted_ids.size()) return seeds;

  const std::size_t last = std::min(sorted_ids.size(), first + static_cast<std::size_t>(std::max(num_lpr, 1)));
  double sum = 0.0;
  for (std::size_t i = first; i < last; ++i) sum += cloud.z[sorted_ids[i]];
  const double lpr = sum / static_cast<double>(last - first);

  const double top = lpr + seed_margin;
  for (const PointId id : sorted_ids) {
    if (!(cloud.z[id] < top)) break;
    seeds.push_back(id);
  }
  return seeds;
}

std::vector<PointId> extract_seeds(const PointCloud& cloud, std::span<const PointId> sorted_ids,
                                   const GpfParams& params) {
  return extract_seeds(cloud, sorted_ids, params.num_lpr, params.seed_margin, params.seed_floor());
}

bool is_vertical_plane(const Eigen::Vector3d& normal, double angle_margin) {
  const double cosine = std::clamp(normal.z(), -1.0, 1.0);
  return std::numbers::pi / 2.0 - std::acos(cosine) < angle_margin;
}

VerticalSplit r_vpf(const PointCloud& cloud, std::span<const PointId> sorted_ids, const VpfParams& vpf,
                    const GpfParams& gpf) {
  VerticalSplit out;
  std::vector<PointId> candidates(sorted_ids.begin(), sorted_ids.end());
  std::vector<PointId> kept;
  for (int k = 0; k < vpf.iterations; ++k) {
    // An iteration that removes nothing leaves the candidates unchanged, so
    // every later iteration would repeat it; stopping is equivalent.
    const auto seeds = extract_seeds(cloud, candidates, vpf.num_seed, gpf.seed_margin, gpf.seed_floor());
    if (seeds.size() < 3) break;
    PlaneEstimate plane;
    try {
      plane = fit(seeds.size(), [&](std::size_t i) { return cloud.point(seeds[i]); });
    } catch (const DegenerateFitError&) {
      break;
    }
    if (!is_vertical_plane(plane.normal, vpf.angle_margin)) break;

    std::vector<PointId> removed;
    kept.clear();
    for (const PointId id : candidates) {
      (std::abs(signed_distance(cloud, id, plane)) < vpf.distance_margin ? removed : kept).push_back(id);
    }
    if (removed.empty()) break;
    out.vertical.insert(out.vertical.end(), removed.begin(), removed.end());
    out.per_iteration.push_back(std::move(removed));
    candidates.swap(kept);
  }
  out.remaining = std::move(candidates);
  return out;
}

GroundFit r_gpf(const PointCloud& cloud, const BinIndex& bin, std::span<const PointId> sorted_ids,
                const GpfParams& params, std::size_t min_points) {
  GroundFit out;
  if (sorted_ids.size() < std::max<std::size_t>(3, min_points)) {
    out.status = FitStatus::TooFewPoints;
    out.outliers.assign(sorted_ids.begin(), sorted_ids.end());
    return out;
  }
  std::vector<PointId> inliers = extract_seeds(cloud, sorted_ids, params);
  if (inliers.empty()) {
    out.status = FitStatus::NoSeeds;
    out.outliers.assign(sorted_ids.begin(), sorted_ids.end());
    return out;
  }
  try {
    for (int it = 0; it < params.num_iter; ++it) {
      const PlaneEstimate plane = pca_plane(cloud, inliers);
      inliers.clear();
      for (const PointId id : sorted_ids) {
        if (signed_distance(cloud, id, plane) < params.dist_thr) inliers.push_back(id);
      }
    }
    out.plane = pca_plane(cloud, inliers);
  } catch (const DegenerateFitError&) {
    out.status = FitStatus::Degenerate;
    out.outliers.assign(sorted_ids.begin(), sorted_ids.end());
    return out;
  }
  out.plane.bin = bin;
  out.status = FitStatus::Ok;

  // both lists follow the z order of sorted_ids
  std::size_t j = 0;
  for (const PointId id : sorted_ids) {
    if (j < out.plane.inliers.size() && out.plane.inliers[j] == id) {
      ++j;
    } else {
      out.outliers.push_back(id);
    }
  }
  return out;
}

}  // namespace groundseg
