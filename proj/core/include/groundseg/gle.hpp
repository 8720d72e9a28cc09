#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "groundseg/plane_fit.hpp"

namespace groundseg {

enum class StdevKind { Population, Sample };

/// Gates and self-update gains. Gain vectors are indexed by global ring
/// m - 1; a vector shorter than `adaptive_rings` repeats its last entry.
struct GleParams {
  double uprightness_thr = 0.707;
  int adaptive_rings = 4;
  std::vector<double> elevation_gain{1.0};           ///< a_m
  std::vector<double> flatness_gain{3.0, 2.0};       ///< b_m
  std::vector<double> revert_gain{1.5};              ///< c_m
  double noise_margin = -0.5;                        ///< delta, meters
  StdevKind stdev = StdevKind::Population;
  std::size_t history_cap = 0;                       ///< 0 keeps every sample

  double a(int m) const;
  double b(int m) const;
  double c(int m) const;
  void validate() const;
};

/// Self-updated thresholds and the definite-ground histories they derive
/// from. Vectors are indexed by m - 1 for m in [1, adaptive_rings].
struct AdaptiveState {
  std::vector<std::vector<double>> elevations;
  std::vector<std::vector<double>> flatnesses;
  std::vector<double> elevation_thr;
  std::vector<double> flatness_thr;
  double noise_height = -2.523;

  static AdaptiveState initial(const GleParams& params, double initial_noise_height);

  int rings() const { return static_cast<int>(elevation_thr.size()); }
  friend bool operator==(const AdaptiveState&, const AdaptiveState&) = default;
};

enum class VerdictReason {
  NotUpright,
  TooRough,  ///< above the elevation gate and not flat enough; TGR may revert
  GroundByElevation,
  GroundByFlatness,
  GroundByUprightness,  ///< outside the adaptive rings only uprightness applies
  Reverted,
};

std::string_view to_string(VerdictReason reason);

struct PlaneVerdict {
  bool ground = false;
  bool definite = false;
  bool reverted = false;
  VerdictReason reason = VerdictReason::NotUpright;
};

double mean_of(std::span<const double> values);
double stdev_of(std::span<const double> values, StdevKind kind = StdevKind::Population);

/// mean + gain * stdev, the common form of every self-updated threshold.
double gated_threshold(std::span<const double> values, double gain,
                       StdevKind kind = StdevKind::Population);

PlaneVerdict classify(const PlaneEstimate& plane, const AdaptiveState& state, const GleParams& params);

/// Elevation and flatness of one definite-ground plane.
struct DefiniteSample {
  int global_ring = 1;
  double elevation = 0.0;
  double flatness = 0.0;
};

/// Appends samples (in the given order) to their ring histories and
/// recomputes thresholds and the noise height from the stored histories.
/// Samples outside the adaptive rings are ignored.
AdaptiveState update_thresholds(AdaptiveState state, std::span<const DefiniteSample> samples,
                                const GleParams& params);

struct RevertCandidate {
  int global_ring = 1;
  double flatness = 0.0;
  PlaneVerdict verdict;
};

/// Per-ring flatness thresholds built from current-frame definite planes;
/// an entry is NaN when the ring has no definite plane this frame.
std::vector<double> frame_flatness_thresholds(std::span<const DefiniteSample> frame_definite,
                                              const GleParams& params);

/// Reverts too-rough candidates whose flatness is below their ring's frame
/// threshold. Rings without current definite planes revert nothing.
void temporal_ground_revert(std::span<RevertCandidate> candidates,
                            std::span<const DefiniteSample> frame_definite, const GleParams& params);

}  // namespace groundseg
