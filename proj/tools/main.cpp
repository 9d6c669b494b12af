// patina command line tool: batch image degradation with bit-exact manifest
// replay, crop extraction, detection recovery, ensemble voting, and metric /
// chart emission. Exit codes: 0 ok, 2 I/O, 3 config, 4 replay mismatch,
// 5 malformed data, 6 external tool failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "patina/chart/svg.hpp"
#include "patina/codec.hpp"
#include "patina/degrade/engine.hpp"
#include "patina/ensemble/vote.hpp"
#include "patina/error.hpp"
#include "patina/face/detector.hpp"
#include "patina/face/geometry.hpp"
#include "patina/face/recovery.hpp"
#include "patina/io/csv.hpp"
#include "patina/io/file.hpp"
#include "patina/io/mapio.hpp"
#include "patina/metrics/auc.hpp"
#include "patina/metrics/correlation.hpp"
#include "patina/metrics/cosine.hpp"
#include "patina/metrics/entropy.hpp"
#include "patina/metrics/sweep.hpp"

namespace fs = std::filesystem;
using namespace patina;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitReplayMismatch = 4;
constexpr int kExitMalformed = 5;
constexpr int kExitExternalTool = 6;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Io:
      return kExitIo;
    case ErrorCode::Config:
    case ErrorCode::InvalidSeverity:
    case ErrorCode::InvalidQuality:
      return kExitConfig;
    case ErrorCode::ReplayMismatch:
      return kExitReplayMismatch;
    case ErrorCode::ExternalCommandFailed:
    case ErrorCode::DetectorError:
      return kExitExternalTool;
    default:
      return kExitMalformed;
  }
}

struct GlobalOpts {
  std::string config_path;
  uint64_t seed = 0;
  unsigned jobs = 1;
  bool quiet = false;
};

void info(const GlobalOpts& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// Sorted (image_id, path) pairs; image_id = filename stem.
std::vector<std::pair<std::string, fs::path>> list_images(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::Io, "not a directory: " + dir);
  }
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && has_image_extension(entry.path())) {
      out.emplace_back(entry.path().stem().string(), entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i].first == out[i + 1].first) {
      throw Error(ErrorCode::DuplicateImageId,
                  "two input files share image_id '" + out[i].first + "'");
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::Io, "no PNG/JPEG inputs in " + dir);
  }
  return out;
}

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::Io, "cannot create output directory: " + dir);
  }
}

degrade::DegradeConfig load_degrade_config(const std::string& path) {
  if (path.empty()) {
    degrade::DegradeConfig cfg;
    cfg.ops = degrade::op_catalog();
    return cfg;
  }
  return degrade::config_from_json(io::read_text_file(path));
}

std::string severity_tag(double severity) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", severity);
  return buf;
}

void require_severity_grid(double s) {
  if (!(s >= 0.0) || s > 1.0 ||
      std::abs(s * 10.0 - std::round(s * 10.0)) > 1e-9) {
    throw Error(ErrorCode::InvalidSeverity,
                "--severity must be a multiple of 0.1 in [0,1], got " + std::to_string(s));
  }
}

std::vector<std::string> split_command_template(const std::string& tmpl) {
  std::vector<std::string> argv;
  std::istringstream in(tmpl);
  std::string tok;
  while (in >> tok) argv.push_back(tok);
  return argv;
}

// ------------------------------------------------------------------ degrade

int cmd_degrade(const GlobalOpts& g, const std::string& input_dir,
                const std::string& output_dir, const std::vector<double>& severities) {
  for (double s : severities) require_severity_grid(s);
  const auto cfg = load_degrade_config(g.config_path);
  const auto files = list_images(input_dir);
  ensure_output_dir(output_dir);

  std::vector<std::pair<std::string, RasterImage>> batch;
  batch.reserve(files.size());
  for (const auto& [id, path] : files) {
    batch.emplace_back(id, load_image(path.string()));
  }

  degrade::Manifest manifest;
  manifest.global_seed = g.seed;
  manifest.config_digest = degrade::config_digest(cfg);
  std::vector<std::string> written;
  try {
    for (double severity : severities) {
      auto [outputs, part] = degrade::degrade_batch(batch, cfg, severity, g.seed, g.jobs);
      for (size_t i = 0; i < outputs.size(); ++i) {
        const std::string name = batch[i].first + "__s" + severity_tag(severity) + ".png";
        const std::string path = (fs::path(output_dir) / name).string();
        save_png(path, outputs[i]);
        written.push_back(path);
      }
      for (auto& rec : part.images) manifest.images.push_back(std::move(rec));
    }
    io::write_text_file((fs::path(output_dir) / "manifest.json").string(),
                        degrade::manifest_to_json(manifest));
  } catch (...) {
    // No partial result set: remove everything this run managed to write.
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
  info(g, "degraded " + std::to_string(files.size()) + " image(s) at " +
              std::to_string(severities.size()) + " severity level(s)");
  return kExitOk;
}

// ------------------------------------------------------------------- replay

int cmd_replay(const GlobalOpts& g, const std::string& manifest_path,
               const std::string& input_dir, const std::string& output_dir) {
  const auto manifest = degrade::manifest_from_json(io::read_text_file(manifest_path));
  if (manifest.engine_version != degrade::kEngineVersion) {
    std::cerr << "warning: manifest engine_version '" << manifest.engine_version
              << "' differs from '" << degrade::kEngineVersion << "', proceeding\n";
  }
  const auto files = list_images(input_dir);
  std::map<std::string, fs::path> by_id(files.begin(), files.end());
  if (!output_dir.empty()) ensure_output_dir(output_dir);

  std::map<std::string, RasterImage> cache;
  std::vector<std::string> mismatched;
  for (const auto& rec : manifest.images) {
    auto it = by_id.find(rec.image_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::Io, "input image missing for manifest id '" + rec.image_id + "'");
    }
    auto cached = cache.find(rec.image_id);
    if (cached == cache.end()) {
      cached = cache.emplace(rec.image_id, load_image(it->second.string())).first;
    }
    const RasterImage out = degrade::replay(cached->second, rec);
    const std::string digest = degrade::output_digest(out);
    if (digest != rec.output_sha256) {
      mismatched.push_back(rec.image_id);
    }
    if (!output_dir.empty()) {
      const std::string name =
          rec.image_id + "__s" + severity_tag(rec.plan.severity) + ".png";
      save_png((fs::path(output_dir) / name).string(), out);
    }
  }
  if (!mismatched.empty()) {
    std::cerr << "replay mismatch for " << mismatched.size() << " image(s):";
    for (const auto& id : mismatched) std::cerr << " " << id;
    std::cerr << "\n";
    return kExitReplayMismatch;
  }
  info(g, "replayed " + std::to_string(manifest.images.size()) + " record(s), all digests match");
  return kExitOk;
}

// --------------------------------------------------------------------- crop

int cmd_crop(const GlobalOpts& g, const std::string& mode, const std::string& input_dir,
             const std::string& output_dir, const std::string& bbox_csv, double factor,
             uint32_t out_size) {
  const auto files = list_images(input_dir);
  ensure_output_dir(output_dir);

  if (mode == "global") {
    for (const auto& [id, path] : files) {
      const RasterImage img = load_image(path.string());
      const RasterImage crop = face::center_crop(img, out_size);
      save_png((fs::path(output_dir) / (id + ".png")).string(), crop);
    }
    info(g, "wrote " + std::to_string(files.size()) + " global crop(s)");
    return kExitOk;
  }
  if (mode != "face") {
    throw Error(ErrorCode::Config, "--mode must be face or global");
  }
  if (bbox_csv.empty()) {
    throw Error(ErrorCode::Config, "face mode requires --bbox <csv>");
  }
  const auto rows = io::load_detection_csv(bbox_csv);
  std::map<std::string, io::DetectionCsvRow> by_id;
  for (const auto& row : rows) by_id[row.image_id] = row;

  size_t written = 0;
  std::vector<std::string> skipped;
  for (const auto& [id, path] : files) {
    auto it = by_id.find(id);
    if (it == by_id.end() || !it->second.has_detection) {
      skipped.push_back(id);
      continue;
    }
    const RasterImage img = load_image(path.string());
    const face::BBox box{it->second.x, it->second.y, it->second.w, it->second.h};
    const face::BBox expanded = face::expand_bbox(box, factor, img.width, img.height);
    const RasterImage crop = face::crop_resize(img, expanded, out_size);
    save_png((fs::path(output_dir) / (id + ".png")).string(), crop);
    ++written;
  }
  if (!skipped.empty()) {
    std::cerr << "skipped (no detection):";
    for (const auto& id : skipped) std::cerr << " " << id;
    std::cerr << "\n";
  }
  info(g, "wrote " + std::to_string(written) + " face crop(s), skipped " +
              std::to_string(skipped.size()));
  return kExitOk;
}

// ------------------------------------------------------------------ recover

int cmd_recover(const GlobalOpts& g, const std::string& input_dir,
                const std::string& detector_file, const std::string& detector_cmd,
                const std::string& enhancer_cmd, const std::string& detections_out,
                const std::string& report_out, double base_threshold, bool no_chain) {
  const auto files = list_images(input_dir);

  std::unique_ptr<face::Detector> detector;
  if (!detector_file.empty()) {
    std::map<std::string, std::optional<face::Detection>> records;
    for (const auto& row : io::load_detection_csv(detector_file)) {
      if (row.has_detection) {
        records[row.image_id] =
            face::Detection{face::BBox{row.x, row.y, row.w, row.h}, row.confidence};
      } else {
        records[row.image_id] = std::nullopt;
      }
    }
    detector = std::make_unique<face::FileDetector>(std::move(records));
  } else if (!detector_cmd.empty()) {
    detector = std::make_unique<face::CommandDetector>(split_command_template(detector_cmd));
  } else {
    throw Error(ErrorCode::Config, "recover needs --detector-file or --detector-cmd");
  }

  face::ExternalHooks hooks;
  if (!enhancer_cmd.empty()) hooks.enhance_argv = split_command_template(enhancer_cmd);
  const auto steps = no_chain ? std::vector<face::RecoveryStep>{}
                              : face::make_recovery_steps(base_threshold);

  std::vector<face::RecoveryOutcome> outcomes;
  std::vector<io::DetectionCsvRow> detections;
  for (const auto& [id, path] : files) {
    const RasterImage img = load_image(path.string());
    auto outcome = face::recover_detection(img, id, *detector, steps, base_threshold, hooks);
    io::DetectionCsvRow row;
    row.image_id = id;
    if (outcome.detection) {
      row.has_detection = true;
      row.x = outcome.detection->bbox.x;
      row.y = outcome.detection->bbox.y;
      row.w = outcome.detection->bbox.w;
      row.h = outcome.detection->bbox.h;
      row.confidence = outcome.detection->confidence;
    }
    detections.push_back(std::move(row));
    outcomes.push_back(std::move(outcome));
  }

  const auto summary = face::recovery_report(outcomes);
  io::write_text_file(detections_out, io::format_detection_csv(detections));

  nlohmann::json report;
  report["total"] = summary.total;
  report["direct"] = summary.direct;
  report["recovered_per_step"] = summary.recovered_per_step;
  report["failed"] = summary.failed;
  report["failure_rate"] = summary.failure_rate;
  nlohmann::json per_image = nlohmann::json::array();
  for (const auto& o : outcomes) {
    nlohmann::json entry;
    entry["image_id"] = o.image_id;
    entry["status"] = face::recovery_status_name(o.status);
    if (o.status == face::RecoveryStatus::Recovered) entry["step"] = o.recovered_step;
    entry["steps_attempted"] = o.steps_attempted;
    per_image.push_back(std::move(entry));
  }
  report["outcomes"] = std::move(per_image);
  io::write_text_file(report_out, report.dump(2) + "\n");

  info(g, "recovery: " + std::to_string(summary.direct) + " direct, " +
              std::to_string(summary.total - summary.direct - summary.failed) +
              " recovered, " + std::to_string(summary.failed) + " failed");
  return kExitOk;
}

// ----------------------------------------------------------------- ensemble

ensemble::VoteConfig parse_vote_config(const std::string& weights, const std::string& mode,
                                       double bin) {
  ensemble::VoteConfig cfg;
  cfg.bin = bin;
  if (!weights.empty()) {
    double w[3];
    int consumed = 0;
    if (std::sscanf(weights.c_str(), "%lf:%lf:%lf%n", &w[0], &w[1], &w[2], &consumed) != 3 ||
        consumed != static_cast<int>(weights.size())) {
      throw Error(ErrorCode::Config, "--weights must look like 1:2:2, got '" + weights + "'");
    }
    cfg.w_local = w[0];
    cfg.w_global = w[1];
    cfg.w_fusion = w[2];
  }
  if (mode == "discretized") {
    cfg.mode = ensemble::VoteMode::Discretized;
  } else if (mode == "continuous") {
    cfg.mode = ensemble::VoteMode::Continuous;
  } else {
    throw Error(ErrorCode::Config, "--mode must be discretized or continuous");
  }
  cfg.validate();
  return cfg;
}

int cmd_ensemble(const GlobalOpts& g, const std::string& local_csv,
                 const std::string& global_csv, const std::string& fusion_csv,
                 const std::string& weights, const std::string& mode, double bin,
                 const std::string& output_csv) {
  const auto cfg = parse_vote_config(weights, mode, bin);
  ScoreTable local;
  if (!local_csv.empty()) local = io::load_score_csv(local_csv);
  const ScoreTable global_t = io::load_score_csv(global_csv);
  const ScoreTable fusion_t = io::load_score_csv(fusion_csv);
  const ScoreTable voted = ensemble::vote_table(local, global_t, fusion_t, cfg);
  io::save_score_csv(output_csv, voted);
  info(g, "voted " + std::to_string(voted.size()) + " image(s) [" +
              ensemble::vote_mode_name(cfg.mode) + "]");
  return kExitOk;
}

// --------------------------------------------------------------------- eval

int cmd_eval(const std::string& scores_csv, const std::string& labels_csv) {
  const auto scores = io::load_score_csv(scores_csv);
  const auto labels = io::load_label_csv(labels_csv);
  const double auc = metrics::roc_auc(scores, labels);
  std::printf("%.6f\n", auc);
  return kExitOk;
}

// ---------------------------------------------------------------------- xai

std::vector<std::pair<std::string, fs::path>> list_files_by_stem(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::Io, "not a directory: " + dir);
  }
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      out.emplace_back(entry.path().stem().string(), entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw Error(ErrorCode::Io, "no files in " + dir);
  }
  return out;
}

std::string format_value_csv(const std::map<std::string, double>& values) {
  std::string out = "image_id,value\n";
  for (const auto& [id, v] : values) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += id + "," + buf + "\n";
  }
  return out;
}

int cmd_xai_entropy(const GlobalOpts& g, const std::string& maps_dir,
                    const std::string& output_csv, bool normalize) {
  std::map<std::string, double> values;
  for (const auto& [id, path] : list_files_by_stem(maps_dir)) {
    try {
      auto map = io::load_activation_map(path.string());
      if (normalize) metrics::normalize_minmax(map);
      values[id] = metrics::attribution_entropy(map);
    } catch (const Error& e) {
      throw Error(e.code(), id + ": " + e.what());
    }
  }
  io::write_text_file(output_csv, format_value_csv(values));
  info(g, "entropy for " + std::to_string(values.size()) + " map(s)");
  return kExitOk;
}

int cmd_xai_cosine(const GlobalOpts& g, const std::string& ref_dir, const std::string& cmp_dir,
                   const std::string& output_csv) {
  const auto refs = list_files_by_stem(ref_dir);
  const auto cmps = list_files_by_stem(cmp_dir);
  std::map<std::string, fs::path> ref_map(refs.begin(), refs.end());
  std::map<std::string, fs::path> cmp_map(cmps.begin(), cmps.end());
  std::set<std::string> diff;
  for (const auto& [id, p] : ref_map)
    if (!cmp_map.count(id)) diff.insert(id);
  for (const auto& [id, p] : cmp_map)
    if (!ref_map.count(id)) diff.insert(id);
  if (!diff.empty()) {
    std::string msg = "ref/cmp stems differ:";
    for (const auto& id : diff) msg += " " + id;
    throw Error(ErrorCode::IdMismatch, msg);
  }
  std::map<std::string, double> values;
  for (const auto& [id, ref_path] : ref_map) {
    try {
      const auto a = io::load_embedding(ref_path.string());
      const auto b = io::load_embedding(cmp_map.at(id).string());
      values[id] = metrics::cosine_similarity(a, b);
    } catch (const Error& e) {
      throw Error(e.code(), id + ": " + e.what());
    }
  }
  io::write_text_file(output_csv, format_value_csv(values));
  info(g, "cosine for " + std::to_string(values.size()) + " pair(s)");
  return kExitOk;
}

// ---------------------------------------------------------------- correlate

std::pair<std::string, std::string> split_named_arg(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size()) {
    throw Error(ErrorCode::Config, "expected NAME=FILE, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

int cmd_correlate(const GlobalOpts& g, const std::vector<std::string>& named_tables,
                  const std::string& output_csv) {
  std::vector<std::pair<std::string, ScoreTable>> tables;
  for (const auto& arg : named_tables) {
    auto [name, path] = split_named_arg(arg);
    tables.emplace_back(name, io::load_score_csv(path));
  }
  const auto m = metrics::pearson_matrix(tables);
  std::string out = "name";
  for (const auto& name : m.names) out += "," + name;
  out += "\n";
  for (size_t i = 0; i < m.names.size(); ++i) {
    out += m.names[i];
    for (size_t j = 0; j < m.names.size(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", m.r[i][j]);
      out += std::string(",") + buf;
    }
    out += "\n";
  }
  io::write_text_file(output_csv, out);
  info(g, "correlated " + std::to_string(m.names.size()) + " table(s)");
  return kExitOk;
}

// -------------------------------------------------------------------- curve

int cmd_curve(const GlobalOpts& g, const std::vector<std::string>& named_sweeps,
              const std::string& stat_name, const std::string& prefix,
              const std::string& title, const std::string& x_label,
              const std::string& y_label) {
  metrics::SweepStat stat;
  if (stat_name == "mean") {
    stat = metrics::SweepStat::Mean;
  } else if (stat_name == "median") {
    stat = metrics::SweepStat::Median;
  } else {
    throw Error(ErrorCode::Config, "--stat must be mean or median");
  }

  chart::ChartSpec spec;
  spec.title = title;
  spec.x_label = x_label;
  spec.y_label = y_label;
  std::string csv = "series,severity,value,count\n";
  for (const auto& arg : named_sweeps) {
    auto [name, path] = split_named_arg(arg);
    const auto rows = io::load_sweep_csv(path);
    const auto points = metrics::sweep_aggregate(rows, stat);
    chart::Series series;
    series.name = name;
    for (const auto& p : points) {
      series.x.push_back(p.severity);
      series.y.push_back(p.aggregate);
      char sev[16], val[32];
      std::snprintf(sev, sizeof(sev), "%.1f", p.severity);
      std::snprintf(val, sizeof(val), "%.6f", p.aggregate);
      csv += name + "," + sev + "," + val + "," + std::to_string(p.count) + "\n";
    }
    spec.series.push_back(std::move(series));
  }
  io::write_text_file(prefix + ".csv", csv);
  io::write_text_file(prefix + ".svg", chart::render_chart(spec));
  info(g, "wrote " + prefix + ".csv and " + prefix + ".svg");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patina: compound image degradation, recovery and evaluation toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "degradation config JSON");
  app.add_option("--seed", g.seed, "global RNG seed");
  app.add_option("--jobs", g.jobs, "worker thread count")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "suppress progress messages");

  // degrade
  auto* deg = app.add_subcommand("degrade", "apply randomized degradation plans");
  std::string deg_input, deg_output;
  std::vector<double> deg_severities;
  deg->add_option("--input", deg_input, "input image directory")->required();
  deg->add_option("--output", deg_output, "output directory")->required();
  deg->add_option("--severity", deg_severities, "severity level(s), multiples of 0.1")
      ->required();

  // replay
  auto* rep = app.add_subcommand("replay", "re-run a manifest and verify digests");
  std::string rep_manifest, rep_input, rep_output;
  rep->add_option("--manifest", rep_manifest, "manifest.json path")->required();
  rep->add_option("--input", rep_input, "original input directory")->required();
  rep->add_option("--output", rep_output, "optional directory for regenerated images");

  // crop
  auto* crop = app.add_subcommand("crop", "extract face or global crops");
  std::string crop_mode, crop_input, crop_output, crop_bbox;
  double crop_factor = 1.3;
  uint32_t crop_size = face::kCropSize;
  crop->add_option("--mode", crop_mode, "face or global")->required();
  crop->add_option("--input", crop_input, "input image directory")->required();
  crop->add_option("--output", crop_output, "output directory")->required();
  crop->add_option("--bbox", crop_bbox, "detection CSV (face mode)");
  crop->add_option("--factor", crop_factor, "bbox expansion factor");
  crop->add_option("--size", crop_size, "output side length");

  // recover
  auto* rec = app.add_subcommand("recover", "run the detection recovery chain");
  std::string rec_input, rec_det_file, rec_det_cmd, rec_enh_cmd;
  std::string rec_detections = "detections.csv", rec_report = "recovery_report.json";
  double rec_base = 0.5;
  bool rec_no_chain = false;
  rec->add_option("--input", rec_input, "input image directory")->required();
  rec->add_option("--detector-file", rec_det_file, "detection CSV keyed by image_id");
  rec->add_option("--detector-cmd", rec_det_cmd,
                  "detector command template with {input} placeholder");
  rec->add_option("--enhancer-cmd", rec_enh_cmd,
                  "enhancer command template with {input} {output} placeholders");
  rec->add_option("--detections", rec_detections, "output detection CSV");
  rec->add_option("--report", rec_report, "output report JSON");
  rec->add_option("--base-threshold", rec_base, "acceptance threshold for raw + steps 1-6");
  rec->add_flag("--no-chain", rec_no_chain, "raw detection only, skip the recovery chain");

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "weighted discretized vote over score tables");
  std::string ens_local, ens_global, ens_fusion, ens_weights = "1:2:2";
  std::string ens_mode = "discretized", ens_output;
  double ens_bin = 0.1;
  ens->add_option("--local", ens_local, "local stream score CSV (optional)");
  ens->add_option("--global", ens_global, "global stream score CSV")->required();
  ens->add_option("--fusion", ens_fusion, "fusion stream score CSV")->required();
  ens->add_option("--weights", ens_weights, "local:global:fusion weights");
  ens->add_option("--mode", ens_mode, "discretized or continuous");
  ens->add_option("--bin", ens_bin, "quantization bin width");
  ens->add_option("--output", ens_output, "output score CSV")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "ROC-AUC of scores against labels");
  std::string ev_scores, ev_labels;
  ev->add_option("--scores", ev_scores, "score CSV")->required();
  ev->add_option("--labels", ev_labels, "label CSV")->required();

  // xai-entropy
  auto* xe = app.add_subcommand("xai-entropy", "attribution entropy per activation map");
  std::string xe_maps, xe_output;
  bool xe_norm = false;
  xe->add_option("--maps", xe_maps, "directory of AMAP/CSV activation maps")->required();
  xe->add_option("--output", xe_output, "output CSV")->required();
  xe->add_flag("--normalize", xe_norm, "min-max normalize maps first");

  // xai-cosine
  auto* xc = app.add_subcommand("xai-cosine", "embedding cosine similarity per id");
  std::string xc_ref, xc_cmp, xc_output;
  xc->add_option("--ref", xc_ref, "reference embedding directory")->required();
  xc->add_option("--cmp", xc_cmp, "comparison embedding directory")->required();
  xc->add_option("--output", xc_output, "output CSV")->required();

  // correlate
  auto* cor = app.add_subcommand("correlate", "pairwise Pearson correlation of score tables");
  std::vector<std::string> cor_tables;
  std::string cor_output;
  cor->add_option("tables", cor_tables, "NAME=FILE score tables (two or more)")
      ->expected(-2);
  cor->add_option("--output", cor_output, "output CSV")->required();

  // curve
  auto* cur = app.add_subcommand("curve", "aggregate severity sweeps into CSV + SVG chart");
  std::vector<std::string> cur_sweeps;
  std::string cur_stat = "mean", cur_prefix, cur_title = "severity sweep";
  std::string cur_xlabel = "severity", cur_ylabel = "value";
  cur->add_option("--sweep", cur_sweeps, "NAME=FILE sweep CSVs")->required();
  cur->add_option("--stat", cur_stat, "mean or median");
  cur->add_option("--output-prefix", cur_prefix, "output path prefix")->required();
  cur->add_option("--title", cur_title, "chart title");
  cur->add_option("--x-label", cur_xlabel, "x axis label");
  cur->add_option("--y-label", cur_ylabel, "y axis label");

  CLI11_PARSE(app, argc, argv);

  try {
    if (deg->parsed()) return cmd_degrade(g, deg_input, deg_output, deg_severities);
    if (rep->parsed()) return cmd_replay(g, rep_manifest, rep_input, rep_output);
    if (crop->parsed())
      return cmd_crop(g, crop_mode, crop_input, crop_output, crop_bbox, crop_factor, crop_size);
    if (rec->parsed())
      return cmd_recover(g, rec_input, rec_det_file, rec_det_cmd, rec_enh_cmd, rec_detections,
                         rec_report, rec_base, rec_no_chain);
    if (ens->parsed())
      return cmd_ensemble(g, ens_local, ens_global, ens_fusion, ens_weights, ens_mode, ens_bin,
                          ens_output);
    if (ev->parsed()) return cmd_eval(ev_scores, ev_labels);
    if (xe->parsed()) return cmd_xai_entropy(g, xe_maps, xe_output, xe_norm);
    if (xc->parsed()) return cmd_xai_cosine(g, xc_ref, xc_cmp, xc_output);
    if (cor->parsed()) return cmd_correlate(g, cor_tables, cor_output);
    if (cur->parsed())
      return cmd_curve(g, cur_sweeps, cur_stat, cur_prefix, cur_title, cur_xlabel, cur_ylabel);
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
