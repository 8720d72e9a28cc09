#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "groundseg/classes.hpp"
#include "groundseg/gle.hpp"
#include "groundseg/point_cloud.hpp"

namespace groundseg {

struct FrameMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t excluded = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool empty_eval = false;  ///< a zero denominator forced a metric to 0

  std::size_t total() const { return tp + fp + fn + tn + excluded; }
  /// Fills precision, recall, f1 and empty_eval from the counts.
  void finalize();
};

/// Noise predictions count as non-ground. Throws ContractViolation when the
/// lengths differ.
FrameMetrics evaluate(const PointClassification& classes, const LabelSet& labels,
                      const GroundClassMap& mapping = {});

struct MetricSummary {
  double mean = 0.0;
  double stdev = 0.0;
};

struct SequenceSummary {
  std::size_t frames = 0;
  MetricSummary precision;
  MetricSummary recall;
  MetricSummary f1;
};

/// Per-metric mean and population stdev. Throws ContractViolation when empty.
SequenceSummary summarize(const std::vector<FrameMetrics>& frames);

inline constexpr const char* kMetricsCsvHeader = "frame,tp,fp,fn,tn,excluded,precision,recall,f1";
inline constexpr const char* kThresholdCsvHeader = "frame,m,e_tau,f_tau,h_noise,e_count,f_count";

std::string metrics_csv_row(std::size_t frame, const FrameMetrics& m);

/// One row per (frame, adaptive ring), header first. Throws
/// ContractViolation for an empty trace.
std::vector<std::string> dump_threshold_stats(const std::vector<AdaptiveState>& trace);

}  // namespace groundseg
