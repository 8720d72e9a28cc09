#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "groundseg/cli.hpp"
#include "groundseg/cloud_io.hpp"
#include "groundseg/config.hpp"
#include "groundseg/error.hpp"
#include "groundseg/eval.hpp"
#include "groundseg/pipeline.hpp"
#include "groundseg/scene.hpp"

namespace groundseg::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = GROUNDSEG_VERSION;

struct CommonOptions {
  std::string config;
  std::string output;
  bool disable_rnr = false;
  bool disable_rvpf = false;
  bool disable_tgr = false;
  int parallelism = 0;  // 0 keeps the config value
  std::uint64_t seed = 0;
  bool export_ply = false;
  std::string stats_csv;
};

struct ResolvedConfig {
  RunConfig run;
  std::string source;  // "defaults", "file" or "defaults (config file missing)"
};

void add_common(CLI::App& cmd, CommonOptions& o, bool needs_output) {
  cmd.add_option("--config", o.config, "Key-value configuration file");
  auto* out = cmd.add_option("--output,-o", o.output, "Output directory");
  if (needs_output) out->required();
  cmd.add_flag("--disable-rnr", o.disable_rnr, "Skip reflected noise removal");
  cmd.add_flag("--disable-rvpf", o.disable_rvpf, "Skip vertical plane fitting");
  cmd.add_flag("--disable-tgr", o.disable_tgr, "Skip temporal ground revert");
  cmd.add_option("--parallelism", o.parallelism, "Worker threads for bin processing")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "Random seed");
  cmd.add_flag("--export-ply", o.export_ply, "Write a colored PLY per frame");
  cmd.add_option("--stats-csv", o.stats_csv, "Write per-frame adaptive threshold statistics");
}

ResolvedConfig resolve_config(const CommonOptions& o, std::ostream& err) {
  ResolvedConfig rc;
  rc.source = "defaults";
  if (!o.config.empty()) {
    if (fs::exists(o.config)) {
      rc.run = load_config(o.config);
      rc.source = "file";
    } else {
      err << "warning: config file " << o.config << " not found; using defaults\n";
      rc.source = "defaults (config file missing)";
    }
  }
  auto& p = rc.run.pipeline;
  if (o.disable_rnr) p.enable_rnr = false;
  if (o.disable_rvpf) p.enable_rvpf = false;
  if (o.disable_tgr) p.enable_tgr = false;
  if (o.parallelism > 0) p.parallelism = o.parallelism;
  p.validate();
  return rc;
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : to_key_values(cfg)) j[k] = v;
  return j;
}

json ablation_json(const PipelineConfig& p) {
  return {{"rnr", p.enable_rnr}, {"rvpf", p.enable_rvpf}, {"tgr", p.enable_tgr}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

void write_lines(const fs::path& path, const std::vector<std::string>& rows) {
  std::string text;
  for (const auto& r : rows) text += r + '\n';
  write_text(path, text);
}

/// Manifest plus a plain config snapshot that `--config` accepts again.
void write_manifest(const fs::path& dir, json manifest, const RunConfig& cfg) {
  write_text(dir / "config.txt", format_key_values(to_key_values(cfg)));
  manifest["config_snapshot"] = "config.txt";
  write_text(dir / "manifest.json", manifest.dump(2) + '\n');
}

json manifest_base(const std::string& command, const ResolvedConfig& rc, std::uint64_t seed) {
  json m;
  m["tool"] = "groundseg";
  m["version"] = kVersion;
  m["command"] = command;
  m["config_source"] = rc.source;
  m["config"] = config_json(rc.run);
  m["ablation"] = ablation_json(rc.run.pipeline);
  m["seed"] = seed;
  return m;
}

json timing_json(const StageTimings& t) {
  return {{"rnr_ms", t.rnr_ms}, {"czm_ms", t.czm_ms}, {"fit_ms", t.fit_ms},
          {"update_ms", t.update_ms}, {"tgr_ms", t.tgr_ms}, {"total_ms", t.total_ms}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string pct(const MetricSummary& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f±%.2f", 100.0 * s.mean, 100.0 * s.stdev);
  return buf;
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  CommonOptions common;
  std::string scans;
  std::string labels;
};

int cmd_segment(const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  const ResolvedConfig rc = resolve_config(a.common, err);
  const auto scans = list_scans(a.scans);
  if (scans.empty()) throw IoError("no .bin scans in " + a.scans);
  const fs::path dir = a.common.output;
  ensure_dir(dir);

  GroundSegmenter seg(rc.run.pipeline);
  std::vector<AdaptiveState> trace;
  json frames = json::array();
  for (const auto& scan : scans) {
    const ScanRead read = read_scan(scan, rc.run.rings);
    if (read.report.skipped_nonfinite > 0) {
      err << "warning: " << scan.filename().string() << ": skipped " << read.report.skipped_nonfinite
          << " non-finite records\n";
    }
    const SegmentationResult result = seg.process(read.cloud);
    trace.push_back(seg.state());

    const std::string stem = scan.stem().string();
    const fs::path cls = dir / (stem + ".cls");
    write_classes(result.classes, cls);
    json f = {{"input", scan.string()},
              {"points", read.cloud.size()},
              {"classes", cls.filename().string()},
              {"ground", result.count(PointClass::Ground)},
              {"noise", result.count(PointClass::Noise)},
              {"timing", timing_json(result.timings)}};
    if (a.common.export_ply) {
      const fs::path ply = dir / (stem + ".ply");
      if (!a.labels.empty()) {
        const LabelSet labels = load_labels(fs::path(a.labels) / (stem + ".label"), read.cloud);
        export_ply(read.cloud, result.classes, &labels, rc.run.classes, ply);
      } else {
        export_ply(read.cloud, result.classes, ply);
      }
      f["ply"] = ply.filename().string();
    }
    frames.push_back(std::move(f));
  }

  json m = manifest_base("segment", rc, a.common.seed);
  m["scan_dir"] = a.scans;
  m["frames"] = std::move(frames);
  if (!a.common.stats_csv.empty()) {
    write_lines(a.common.stats_csv, dump_threshold_stats(trace));
    m["stats_csv"] = a.common.stats_csv;
  }
  write_manifest(dir, std::move(m), rc.run);
  out << "segmented " << scans.size() << " frame(s) into " << dir.string() << '\n';
  return 0;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  CommonOptions common;
  std::string scans;
  std::string labels;
  std::string predictions;
  std::string method = "pipeline";
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const ResolvedConfig rc = resolve_config(a.common, err);
  const auto scans = list_scans(a.scans);
  if (scans.empty()) throw IoError("no .bin scans in " + a.scans);

  std::size_t label_files = 0;
  for (const auto& e : fs::directory_iterator(a.labels)) {
    if (e.is_regular_file() && e.path().extension() == ".label") ++label_files;
  }
  if (label_files != scans.size()) {
    throw FormatError("found " + std::to_string(scans.size()) + " scans but " + std::to_string(label_files) +
                      " label files");
  }
  const fs::path dir = a.common.output;
  ensure_dir(dir);

  GroundSegmenter seg(rc.run.pipeline);
  std::vector<AdaptiveState> trace;
  std::vector<FrameMetrics> metrics;
  std::vector<std::string> rows{kMetricsCsvHeader};
  json frames = json::array();
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const auto& scan = scans[i];
    const std::string stem = scan.stem().string();
    const PointCloud cloud = load_scan(scan, rc.run.rings);
    const fs::path label_path = fs::path(a.labels) / (stem + ".label");
    if (!fs::exists(label_path)) throw IoError("missing label file " + label_path.string());
    const LabelSet labels = load_labels(label_path, cloud);

    PointClassification classes;
    json f = {{"input", scan.string()}, {"labels", label_path.string()}, {"points", cloud.size()}};
    if (!a.predictions.empty()) {
      const fs::path pred = fs::path(a.predictions) / (stem + ".cls");
      classes = load_classes(pred, cloud.size());
      f["predictions"] = pred.string();
    } else if (a.method == "ransac") {
      const std::uint64_t seed = a.common.seed + i;
      SegmentationResult r = ransac_baseline(cloud, rc.run.ransac_iterations, rc.run.ransac_dist_thr, seed);
      classes = std::move(r.classes);
      f["seed"] = seed;
      f["timing"] = timing_json(r.timings);
    } else {
      SegmentationResult r = seg.process(cloud);
      trace.push_back(seg.state());
      classes = std::move(r.classes);
      f["timing"] = timing_json(r.timings);
    }
    const FrameMetrics fm = evaluate(classes, labels, rc.run.classes);
    if (fm.empty_eval) err << "warning: " << stem << ": empty evaluation (zero denominator)\n";
    rows.push_back(metrics_csv_row(i, fm));
    metrics.push_back(fm);
    if (a.common.export_ply) {
      const fs::path ply = dir / (stem + ".ply");
      export_ply(cloud, classes, &labels, rc.run.classes, ply);
      f["ply"] = ply.filename().string();
    }
    frames.push_back(std::move(f));
  }
  write_lines(dir / "metrics.csv", rows);

  const SequenceSummary s = summarize(metrics);
  const std::string method = a.predictions.empty() ? a.method : "predictions";
  out << "| method | frames | precision | recall | f1 |\n";
  out << "|---|---|---|---|---|\n";
  out << "| " << method << " | " << s.frames << " | " << pct(s.precision) << " | " << pct(s.recall) << " | "
      << pct(s.f1) << " |\n";

  json m = manifest_base("evaluate", rc, a.common.seed);
  m["method"] = method;
  m["scan_dir"] = a.scans;
  m["label_dir"] = a.labels;
  m["frames"] = std::move(frames);
  m["metrics_csv"] = "metrics.csv";
  m["summary"] = {{"frames", s.frames},
                  {"precision", {{"mean", s.precision.mean}, {"stdev", s.precision.stdev}}},
                  {"recall", {{"mean", s.recall.mean}, {"stdev", s.recall.stdev}}},
                  {"f1", {{"mean", s.f1.mean}, {"stdev", s.f1.stdev}}}};
  if (!a.common.stats_csv.empty()) {
    if (trace.empty()) {
      err << "warning: --stats-csv needs the pipeline method; nothing written\n";
    } else {
      write_lines(a.common.stats_csv, dump_threshold_stats(trace));
      m["stats_csv"] = a.common.stats_csv;
    }
  }
  write_manifest(dir, std::move(m), rc.run);
  return 0;
}

// ------------------------------------------------------------------ bench

struct BenchArgs {
  CommonOptions common;
  std::string scans;
  int repetitions = 5;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const ResolvedConfig rc = resolve_config(a.common, err);
  const auto scans = list_scans(a.scans);
  if (scans.empty()) throw IoError("no .bin scans in " + a.scans);
  std::vector<PointCloud> clouds;
  std::size_t points = 0;
  for (const auto& s : scans) {
    clouds.push_back(load_scan(s, rc.run.rings));
    points += clouds.back().size();
  }

  std::vector<double> total, rnr, czm, fit, update, tgr;
  std::vector<PointClassification> reference;
  bool identical = true;
  for (int rep = 0; rep < a.repetitions; ++rep) {
    GroundSegmenter seg(rc.run.pipeline);
    for (std::size_t i = 0; i < clouds.size(); ++i) {
      SegmentationResult r = seg.process(clouds[i]);
      total.push_back(r.timings.total_ms);
      rnr.push_back(r.timings.rnr_ms);
      czm.push_back(r.timings.czm_ms);
      fit.push_back(r.timings.fit_ms);
      update.push_back(r.timings.update_ms);
      tgr.push_back(r.timings.tgr_ms);
      if (rep == 0) {
        reference.push_back(std::move(r.classes));
      } else if (r.classes != reference[i]) {
        identical = false;
      }
    }
  }
  const SortTiming sort = sort_strategy_bench(clouds.front(), rc.run.pipeline.zones, std::max(3, a.repetitions));

  const double med = median(total);
  out << std::fixed << std::setprecision(3);
  out << "frames: " << clouds.size() << "  mean points/frame: " << points / clouds.size()
      << "  repetitions: " << a.repetitions << "  parallelism: " << rc.run.pipeline.parallelism << '\n';
  out << "median frame time: " << med << " ms  (" << (med > 0.0 ? 1000.0 / med : 0.0) << " Hz)\n";
  out << "per-stage median ms: rnr " << median(rnr) << "  czm " << median(czm) << "  fit " << median(fit)
      << "  update " << median(update) << "  tgr " << median(tgr) << '\n';
  out << "sort strategy (frame 0): global " << sort.global_sort_ms << " ms  bin-wise " << sort.binwise_sort_ms
      << " ms  same partition: " << (sort.identical ? "yes" : "no") << '\n';
  out << "outputs identical across repetitions: " << (identical ? "yes" : "no") << '\n';

  if (!a.common.output.empty()) {
    const fs::path dir = a.common.output;
    ensure_dir(dir);
    json m = manifest_base("bench", rc, a.common.seed);
    m["scan_dir"] = a.scans;
    m["repetitions"] = a.repetitions;
    m["median_ms"] = med;
    m["stage_median_ms"] = {{"rnr", median(rnr)}, {"czm", median(czm)}, {"fit", median(fit)},
                            {"update", median(update)}, {"tgr", median(tgr)}};
    m["sort"] = {{"global_ms", sort.global_sort_ms}, {"binwise_ms", sort.binwise_sort_ms},
                 {"identical", sort.identical}};
    m["outputs_identical"] = identical;
    write_manifest(dir, std::move(m), rc.run);
  }
  return identical ? 0 : 1;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  CommonOptions common;
  std::string spec;
  std::string preset;
  int frames = 1;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  SceneSpec spec;
  if (!a.spec.empty()) {
    spec = scene_from_key_values(read_key_values(a.spec));
  } else if (!a.preset.empty()) {
    spec = scene_preset(a.preset);
  }
  spec.validate();
  const fs::path dir = a.common.output;
  ensure_dir(dir);

  json frames = json::array();
  for (int k = 0; k < a.frames; ++k) {
    const std::uint64_t seed = a.common.seed + static_cast<std::uint64_t>(k);
    const Scene scene = generate_scene(spec, seed);
    for (const auto& w : scene.warnings) err << "warning: frame " << k << ": " << w << '\n';
    const std::string stem = frame_stem(static_cast<std::size_t>(k));
    write_scan(scene.cloud, dir / (stem + ".bin"));
    write_labels(scene.labels, dir / (stem + ".label"));
    frames.push_back({{"scan", stem + ".bin"}, {"labels", stem + ".label"}, {"seed", seed},
                      {"points", scene.cloud.size()}});
  }

  json m;
  m["tool"] = "groundseg";
  m["version"] = kVersion;
  m["command"] = "synth";
  m["preset"] = a.preset;
  m["spec_file"] = a.spec;
  json scene = json::object();
  for (const auto& [k, v] : to_key_values(spec)) scene[k] = v;
  m["scene"] = std::move(scene);
  m["seed"] = a.common.seed;
  m["frames"] = std::move(frames);
  write_text(dir / "scene.txt", format_key_values(to_key_values(spec)));
  write_text(dir / "manifest.json", m.dump(2) + '\n');
  out << "wrote " << a.frames << " frame(s) to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground segmentation for 3D LiDAR scans", "groundseg"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* c_seg = app.add_subcommand("segment", "Label every point of each scan as ground, non-ground or noise");
  c_seg->add_option("scans", seg.scans, "Directory of .bin scans")->required();
  c_seg->add_option("--labels", seg.labels, "Label directory, used only to color PLY exports");
  add_common(*c_seg, seg.common, true);

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Score predictions against semantic labels");
  c_ev->add_option("scans", ev.scans, "Directory of .bin scans")->required();
  c_ev->add_option("labels", ev.labels, "Directory of .label files")->required()->check(CLI::ExistingDirectory);
  c_ev->add_option("--predictions", ev.predictions, "Score existing .cls files instead of segmenting")
      ->check(CLI::ExistingDirectory);
  c_ev->add_option("--method", ev.method, "pipeline or ransac")->check(CLI::IsMember({"pipeline", "ransac"}));
  add_common(*c_ev, ev.common, true);

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Time the pipeline per stage and compare sort strategies");
  c_bench->add_option("scans", bench.scans, "Directory of .bin scans")->required();
  c_bench->add_option("--repetitions,-r", bench.repetitions, "Passes over the scan set")
      ->check(CLI::PositiveNumber);
  add_common(*c_bench, bench.common, false);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate labelled synthetic scans");
  auto* spec_opt = c_synth->add_option("--spec", synth.spec, "Scene key-value file")->check(CLI::ExistingFile);
  c_synth->add_option("--preset", synth.preset, "flat, sloped, downhill, terrace, noisy or rough")
      ->excludes(spec_opt);
  c_synth->add_option("--frames,-n", synth.frames, "Number of frames")->check(CLI::NonNegativeNumber);
  add_common(*c_synth, synth.common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*c_seg) return cmd_segment(seg, out, err);
    if (*c_ev) return cmd_evaluate(ev, out, err);
    if (*c_bench) return cmd_bench(bench, out, err);
    if (*c_synth) return cmd_synth(synth, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"groundseg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace groundseg::cli
