#include "groundseg/eval.hpp"

#include <cstdio>

#include "groundseg/error.hpp"

namespace groundseg {
namespace {

double ratio(std::size_t num, std::size_t den, bool& empty) {
  if (den == 0) {
    empty = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

MetricSummary summarize_metric(const std::vector<FrameMetrics>& frames, double FrameMetrics::*field) {
  std::vector<double> values;
  values.reserve(frames.size());
  for (const auto& f : frames) values.push_back(f.*field);
  return {mean_of(values), stdev_of(values, StdevKind::Population)};
}

}  // namespace

void FrameMetrics::finalize() {
  empty_eval = false;
  precision = ratio(tp, tp + fp, empty_eval);
  recall = ratio(tp, tp + fn, empty_eval);
  if (precision + recall > 0.0) {
    f1 = 2.0 * precision * recall / (precision + recall);
  } else {
    f1 = 0.0;
    empty_eval = true;
  }
}

FrameMetrics evaluate(const PointClassification& classes, const LabelSet& labels, const GroundClassMap& mapping) {
  if (classes.size() != labels.size()) {
    throw ContractViolation("evaluate: " + std::to_string(classes.size()) + " predictions vs " +
                            std::to_string(labels.size()) + " labels");
  }
  FrameMetrics m;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto id = labels.semantic[i];
    if (mapping.is_excluded(id)) {
      ++m.excluded;
      continue;
    }
    const bool truth = mapping.is_ground(id);
    const bool pred = classes[i] == PointClass::Ground;
    if (pred) {
      ++(truth ? m.tp : m.fp);
    } else {
      ++(truth ? m.fn : m.tn);
    }
  }
  m.finalize();
  return m;
}

SequenceSummary summarize(const std::vector<FrameMetrics>& frames) {
  if (frames.empty()) throw ContractViolation("summarize: no frames");
  SequenceSummary s;
  s.frames = frames.size();
  s.precision = summarize_metric(frames, &FrameMetrics::precision);
  s.recall = summarize_metric(frames, &FrameMetrics::recall);
  s.f1 = summarize_metric(frames, &FrameMetrics::f1);
  return s;
}

std::string metrics_csv_row(std::size_t frame, const FrameMetrics& m) {
  return std::to_string(frame) + ',' + std::to_string(m.tp) + ',' + std::to_string(m.fp) + ',' +
         std::to_string(m.fn) + ',' + std::to_string(m.tn) + ',' + std::to_string(m.excluded) + ',' +
         fmt_double(m.precision) + ',' + fmt_double(m.recall) + ',' + fmt_double(m.f1);
}

std::vector<std::string> dump_threshold_stats(const std::vector<AdaptiveState>& trace) {
  if (trace.empty()) throw ContractViolation("dump_threshold_stats: empty trace");
  std::vector<std::string> rows{kThresholdCsvHeader};
  for (std::size_t frame = 0; frame < trace.size(); ++frame) {
    const auto& s = trace[frame];
    for (int m = 1; m <= s.rings(); ++m) {
      const auto i = static_cast<std::size_t>(m - 1);
      rows.push_back(std::to_string(frame) + ',' + std::to_string(m) + ',' + fmt_double(s.elevation_thr[i]) + ',' +
                     fmt_double(s.flatness_thr[i]) + ',' + fmt_double(s.noise_height) + ',' +
                     std::to_string(s.elevations[i].size()) + ',' + std::to_string(s.flatnesses[i].size()));
    }
  }
  return rows;
}

}  // namespace groundseg
