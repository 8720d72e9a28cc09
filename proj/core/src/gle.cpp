#include "groundseg/gle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

double gain_at(const std::vector<double>& gains, int m) {
  if (gains.empty()) throw ContractViolation("gle: empty gain vector");
  const auto i = static_cast<std::size_t>(std::max(m, 1) - 1);
  return gains[std::min(i, gains.size() - 1)];
}

void validate_gains(const std::vector<double>& gains, const char* name) {
  if (gains.empty()) throw ContractViolation(std::string("gle: ") + name + " gains are empty");
  for (const double g : gains) {
    if (!(g > 0.0)) throw ContractViolation(std::string("gle: ") + name + " gains must be > 0");
  }
}

}  // namespace

double GleParams::a(int m) const { return gain_at(elevation_gain, m); }
double GleParams::b(int m) const { return gain_at(flatness_gain, m); }
double GleParams::c(int m) const { return gain_at(revert_gain, m); }

void GleParams::validate() const {
  if (!(uprightness_thr > 0.0 && uprightness_thr <= 1.0)) {
    throw ContractViolation("gle: uprightness threshold must lie in (0, 1]");
  }
  if (adaptive_rings < 1) throw ContractViolation("gle: adaptive ring count must be >= 1");
  validate_gains(elevation_gain, "elevation");
  validate_gains(flatness_gain, "flatness");
  validate_gains(revert_gain, "revert");
  if (!(noise_margin < 0.0)) throw ContractViolation("gle: noise margin delta must be < 0");
}

AdaptiveState AdaptiveState::initial(const GleParams& params, double initial_noise_height) {
  const auto rings = static_cast<std::size_t>(params.adaptive_rings);
  AdaptiveState s;
  s.elevations.assign(rings, {});
  s.flatnesses.assign(rings, {});
  s.elevation_thr.assign(rings, 0.0);
  s.flatness_thr.assign(rings, 0.0);
  s.noise_height = initial_noise_height;
  return s;
}

std::string_view to_string(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::NotUpright: return "not-upright";
    case VerdictReason::TooRough: return "too-rough";
    case VerdictReason::GroundByElevation: return "ground-by-elevation";
    case VerdictReason::GroundByFlatness: return "ground-by-flatness";
    case VerdictReason::GroundByUprightness: return "ground-by-uprightness";
    case VerdictReason::Reverted: return "reverted";
  }
  return "unknown";
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stdev_of(std::span<const double> values, StdevKind kind) {
  const std::size_t n = values.size();
  if (n == 0 || (kind == StdevKind::Sample && n < 2)) return 0.0;
  const double mean = mean_of(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double denom = kind == StdevKind::Population ? static_cast<double>(n) : static_cast<double>(n - 1);
  return std::sqrt(ss / denom);
}

double gated_threshold(std::span<const double> values, double gain, StdevKind kind) {
  return mean_of(values) + gain * stdev_of(values, kind);
}

PlaneVerdict classify(const PlaneEstimate& plane, const AdaptiveState& state, const GleParams& params) {
  PlaneVerdict v;
  if (plane.uprightness() < params.uprightness_thr) {
    v.reason = VerdictReason::NotUpright;
    return v;
  }
  const int m = plane.bin.global_ring;
  if (m > params.adaptive_rings || m > state.rings()) {
    v.ground = true;
    v.reason = VerdictReason::GroundByUprightness;
    return v;
  }
  const auto i = static_cast<std::size_t>(m - 1);
  if (plane.elevation < state.elevation_thr[i]) {
    v.ground = true;
    v.definite = true;
    v.reason = VerdictReason::GroundByElevation;
  } else if (plane.flatness < state.flatness_thr[i]) {
    v.ground = true;
    v.reason = VerdictReason::GroundByFlatness;
  } else {
    v.reason = VerdictReason::TooRough;
  }
  return v;
}

AdaptiveState update_thresholds(AdaptiveState state, std::span<const DefiniteSample> samples,
                                const GleParams& params) {
  const int rings = state.rings();
  for (const auto& s : samples) {
    if (s.global_ring < 1 || s.global_ring > rings) continue;
    const auto i = static_cast<std::size_t>(s.global_ring - 1);
    state.elevations[i].push_back(s.elevation);
    state.flatnesses[i].push_back(s.flatness);
  }
  for (int m = 1; m <= rings; ++m) {
    const auto i = static_cast<std::size_t>(m - 1);
    auto& e = state.elevations[i];
    auto& f = state.flatnesses[i];
    if (params.history_cap > 0) {
      if (e.size() > params.history_cap) e.erase(e.begin(), e.end() - static_cast<std::ptrdiff_t>(params.history_cap));
      if (f.size() > params.history_cap) f.erase(f.begin(), f.end() - static_cast<std::ptrdiff_t>(params.history_cap));
    }
    if (!e.empty()) state.elevation_thr[i] = gated_threshold(e, params.a(m), params.stdev);
    if (!f.empty()) state.flatness_thr[i] = gated_threshold(f, params.b(m), params.stdev);
  }
  if (rings > 0 && !state.elevations[0].empty()) {
    state.noise_height = mean_of(state.elevations[0]) + params.noise_margin;
  }
  return state;
}

std::vector<double> frame_flatness_thresholds(std::span<const DefiniteSample> frame_definite,
                                              const GleParams& params) {
  const auto rings = static_cast<std::size_t>(params.adaptive_rings);
  std::vector<std::vector<double>> per_ring(rings);
  for (const auto& s : frame_definite) {
    if (s.global_ring >= 1 && static_cast<std::size_t>(s.global_ring) <= rings) {
      per_ring[static_cast<std::size_t>(s.global_ring - 1)].push_back(s.flatness);
    }
  }
  std::vector<double> thr(rings, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < rings; ++i) {
    if (!per_ring[i].empty()) {
      thr[i] = gated_threshold(per_ring[i], params.c(static_cast<int>(i + 1)), params.stdev);
    }
  }
  return thr;
}

void temporal_ground_revert(std::span<RevertCandidate> candidates, std::span<const DefiniteSample> frame_definite,
                            const GleParams& params) {
  const auto thr = frame_flatness_thresholds(frame_definite, params);
  for (auto& c : candidates) {
    if (c.verdict.reason != VerdictReason::TooRough) continue;
    if (c.global_ring < 1 || static_cast<std::size_t>(c.global_ring) > thr.size()) continue;
    const double t = thr[static_cast<std::size_t>(c.global_ring - 1)];
    if (std::isnan(t)) continue;
    if (c.flatness < t) {
      c.verdict.ground = true;
      c.verdict.reverted = true;
      c.verdict.reason = VerdictReason::Reverted;
    }
  }
}

}  // namespace groundseg
