#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace groundseg::oracle {

Eigen3 jacobi_eigen(const Eigen::Matrix3d& a) {
  long double m[3][3];
  long double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a(i, j);

  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) off += m[i][j] * m[i][j];
    if (off < 1e-60L) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (m[p][q] == 0) continue;
        const long double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
        const long double t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const long double c = 1 / std::sqrt(t * t + 1);
        const long double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const long double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 3; ++k) {
          const long double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (int k = 0; k < 3; ++k) {
          const long double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return m[i][i] > m[j][j]; });
  Eigen3 out;
  for (int k = 0; k < 3; ++k) {
    const int c = order[k];
    out.values[k] = static_cast<double>(m[c][c]);
    out.vectors[k] = Eigen::Vector3d(static_cast<double>(v[0][c]), static_cast<double>(v[1][c]),
                                     static_cast<double>(v[2][c]))
                         .normalized();
  }
  return out;
}

Eigen::Matrix3d covariance(std::span<const Eigen::Vector3d> points, Eigen::Vector3d* mean) {
  long double mu[3] = {0, 0, 0};
  for (const auto& p : points)
    for (int i = 0; i < 3; ++i) mu[i] += p[i];
  for (auto& v : mu) v /= static_cast<long double>(points.size());
  long double c[3][3] = {};
  for (const auto& p : points)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[i][j] += (p[i] - mu[i]) * (p[j] - mu[j]);
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = static_cast<double>(c[i][j] / static_cast<long double>(points.size()));
  if (mean) *mean = Eigen::Vector3d(static_cast<double>(mu[0]), static_cast<double>(mu[1]), static_cast<double>(mu[2]));
  return out;
}

double gated(std::span<const double> values, double gain) {
  long double sum = 0;
  for (double v : values) sum += v;
  const long double mean = sum / values.size();
  long double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return static_cast<double>(mean + gain * std::sqrt(ss / values.size()));
}

std::optional<BinIndex> bin_of(double x, double y, const ZoneConfig& cfg) {
  const double r = std::sqrt(x * x + y * y);
  double theta = std::atan2(y, x);
  if (theta < 0) theta += 2 * std::numbers::pi;
  int global = 1;
  for (std::size_t k = 0; k < cfg.num_zones(); ++k) {
    const double lo = cfg.boundaries[k], hi = cfg.boundaries[k + 1];
    if (r >= lo && r < hi) {
      const int rings = cfg.ring_counts[k], sectors = cfg.sector_counts[k];
      const int ring = std::min(rings - 1, static_cast<int>(std::floor((r - lo) / ((hi - lo) / rings))));
      const int sector = std::min(sectors - 1, static_cast<int>(std::floor(theta / (2 * std::numbers::pi / sectors))));
      return BinIndex{static_cast<int>(k), ring, sector, global + ring};
    }
    global += cfg.ring_counts[k];
  }
  return std::nullopt;
}

FrameMetrics crosstab(const PointClassification& classes, const LabelSet& labels, const GroundClassMap& map) {
  FrameMetrics m;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto id = labels.semantic[i];
    bool excluded = false, truth = false;
    for (auto e : map.excluded) excluded = excluded || e == id;
    for (auto g : map.ground) truth = truth || g == id;
    if (excluded) {
      m.excluded++;
    } else if (classes[i] == PointClass::Ground) {
      truth ? m.tp++ : m.fp++;
    } else {
      truth ? m.fn++ : m.tn++;
    }
  }
  m.precision = m.tp + m.fp ? double(m.tp) / double(m.tp + m.fp) : 0.0;
  m.recall = m.tp + m.fn ? double(m.tp) / double(m.tp + m.fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

}  // namespace groundseg::oracle
