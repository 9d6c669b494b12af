#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "patina/codec.hpp"
#include "patina/face/detector.hpp"
#include "patina/face/filters.hpp"
#include "patina/image.hpp"
#include "patina/subprocess.hpp"

namespace patina::face {

struct RecoveryStep {
  int step_index = 0;  // 1..7
  std::string name;
  double accept_threshold = 0.5;
};

inline constexpr double kStrictFinalThreshold = 0.9;

/// The canonical 7-step chain. Steps 1-6 accept at base_threshold; step 7
/// accepts only at the strict 0.9.
inline std::vector<RecoveryStep> make_recovery_steps(double base_threshold = 0.5) {
  return {
      {1, "bilateral", base_threshold},
      {2, "median_heavy", base_threshold},
      {3, "external_enhance", base_threshold},
      {4, "sharpen_clahe", base_threshold},
      {5, "nlmeans", base_threshold},
      {6, "median_secondary", base_threshold},
      {7, "nlmeans_clahe", kStrictFinalThreshold},
  };
}

/// External tool hook-ups for the chain. Empty argv = unconfigured.
struct ExternalHooks {
  std::vector<std::string> enhance_argv;  // {input} {output} placeholders
};

struct FilterOutcome {
  RasterImage image;
  bool skipped = false;  // external_enhance with no command configured
};

namespace detail {

inline std::string temp_path(const char* tag) {
  static std::atomic<uint64_t> counter{0};
  const char* tmp = std::getenv("TMPDIR");
  std::string dir = tmp && *tmp ? tmp : "/tmp";
  return dir + "/patina-" + tag + "-" + std::to_string(getpid()) + "-" +
         std::to_string(counter.fetch_add(1)) + ".png";
}

inline RasterImage run_enhancer(const RasterImage& img, const std::vector<std::string>& argv) {
  const std::string in_path = temp_path("enh-in");
  const std::string out_path = temp_path("enh-out");
  save_png(in_path, img);
  CommandResult res;
  try {
    auto cmd = substitute_argv(argv, "{input}", in_path);
    cmd = substitute_argv(std::move(cmd), "{output}", out_path);
    res = run_command(cmd);
  } catch (const Error&) {
    std::remove(in_path.c_str());
    throw;
  }
  std::remove(in_path.c_str());
  if (res.exit_code != 0) {
    std::remove(out_path.c_str());
    throw Error(ErrorCode::ExternalCommandFailed,
                "enhancer exited with status " + std::to_string(res.exit_code));
  }
  RasterImage out;
  try {
    out = load_image(out_path);
  } catch (const Error& e) {
    std::remove(out_path.c_str());
    throw Error(ErrorCode::ExternalCommandFailed,
                std::string("enhancer output unreadable: ") + e.what());
  }
  std::remove(out_path.c_str());
  return out;
}

}  // namespace detail

/// Apply one chain step to the ORIGINAL image (steps never compound).
inline FilterOutcome apply_recovery_filter(const RasterImage& img, const RecoveryStep& step,
                                           const ExternalHooks& hooks = {}) {
  if (step.name == "bilateral") {
    return {bilateral_filter(img, 5.0, 0.1, 11), false};
  }
  if (step.name == "median_heavy") {
    return {median_filter(img, 7), false};
  }
  if (step.name == "external_enhance") {
    if (hooks.enhance_argv.empty()) return {img, true};
    return {detail::run_enhancer(img, hooks.enhance_argv), false};
  }
  if (step.name == "sharpen_clahe") {
    return {clahe_y(unsharp_mask(img, 1.0, 1.5), 8, 2.0), false};
  }
  if (step.name == "nlmeans") {
    return {nlmeans(img, 0.1, 7, 21), false};
  }
  if (step.name == "median_secondary") {
    return {median_filter(img, 5), false};
  }
  if (step.name == "nlmeans_clahe") {
    return {clahe_y(nlmeans(img, 0.1, 7, 21), 8, 2.0), false};
  }
  throw Error(ErrorCode::UnknownOp, "unknown recovery step: " + step.name);
}

enum class RecoveryStatus { DirectHit, Recovered, Failed };

inline const char* recovery_status_name(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::DirectHit: return "direct_hit";
    case RecoveryStatus::Recovered: return "recovered";
    case RecoveryStatus::Failed: return "failed";
  }
  return "?";
}

struct RecoveryOutcome {
  std::string image_id;
  RecoveryStatus status = RecoveryStatus::Failed;
  int recovered_step = 0;  // 1..7 when status == Recovered
  std::optional<Detection> detection;
  int steps_attempted = 0;
};

/// Detect on the raw image, then walk the chain; first acceptance wins.
/// Every step filters the original image, not the previous step's output.
inline RecoveryOutcome recover_detection(const RasterImage& img, const std::string& image_id,
                                         Detector& detector,
                                         const std::vector<RecoveryStep>& steps,
                                         double base_threshold = 0.5,
                                         const ExternalHooks& hooks = {}) {
  RecoveryOutcome outcome;
  outcome.image_id = image_id;
  auto raw = detector.detect(img, image_id);
  if (raw && raw->confidence >= base_threshold) {
    outcome.status = RecoveryStatus::DirectHit;
    outcome.detection = raw;
    return outcome;
  }
  for (const RecoveryStep& step : steps) {
    ++outcome.steps_attempted;
    FilterOutcome filtered = apply_recovery_filter(img, step, hooks);
    auto det = detector.detect(filtered.image, image_id);
    if (det && det->confidence >= step.accept_threshold) {
      outcome.status = RecoveryStatus::Recovered;
      outcome.recovered_step = step.step_index;
      outcome.detection = det;
      return outcome;
    }
  }
  outcome.status = RecoveryStatus::Failed;
  return outcome;
}

struct RecoverySummary {
  size_t total = 0;
  size_t direct = 0;
  std::array<size_t, 7> recovered_per_step{};
  size_t failed = 0;
  double failure_rate = 0.0;
};

inline RecoverySummary recovery_report(const std::vector<RecoveryOutcome>& outcomes) {
  if (outcomes.empty()) {
    throw Error(ErrorCode::EmptyInput, "recovery report needs at least one outcome");
  }
  RecoverySummary s;
  s.total = outcomes.size();
  for (const auto& o : outcomes) {
    switch (o.status) {
      case RecoveryStatus::DirectHit:
        ++s.direct;
        break;
      case RecoveryStatus::Recovered:
        if (o.recovered_step >= 1 && o.recovered_step <= 7) {
          ++s.recovered_per_step[static_cast<size_t>(o.recovered_step - 1)];
        }
        break;
      case RecoveryStatus::Failed:
        ++s.failed;
        break;
    }
  }
  s.failure_rate = static_cast<double>(s.failed) / static_cast<double>(s.total);
  return s;
}

}  // namespace patina::face
