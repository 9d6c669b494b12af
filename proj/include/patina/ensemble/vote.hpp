#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "patina/error.hpp"
#include "patina/io/tables.hpp"

namespace patina::ensemble {

/// Snap a score to the nearest multiple of `bin`, half away from zero,
/// clamped to [0,1]. Idempotent. The quotient is pre-rounded at the 9th
/// decimal so values like 0.85 (stored as 8.4999... / 0.1) land in the
/// upper bin instead of leaking float dust into the tie rule.
inline double quantize_score(double s, double bin = 0.1) {
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    throw Error(ErrorCode::OutOfRange, "score must be in [0,1]");
  }
  if (!(bin > 0.0) || bin > 1.0) {
    throw Error(ErrorCode::OutOfRange, "bin must be in (0,1]");
  }
  const double q = std::llround((s / bin) * 1e9) / 1e9;
  const double r = q < 0.0 ? std::ceil(q - 0.5) : std::floor(q + 0.5);
  return std::min(1.0, std::max(0.0, r * bin));
}

struct StreamScores {
  std::string image_id;
  std::optional<double> local;  // absent = bypassed
  double global = 0.0;
  double fusion = 0.0;
};

enum class VoteMode { Discretized, Continuous };

inline const char* vote_mode_name(VoteMode m) {
  return m == VoteMode::Discretized ? "discretized" : "continuous";
}

struct VoteConfig {
  double w_local = 1.0;
  double w_global = 2.0;
  double w_fusion = 2.0;
  VoteMode mode = VoteMode::Discretized;
  double bin = 0.1;

  void validate() const {
    if (!(w_local >= 0.0) || !(w_global >= 0.0) || !(w_fusion >= 0.0)) {
      throw Error(ErrorCode::Config, "vote weights must be non-negative");
    }
    if (w_local + w_global + w_fusion <= 0.0) {
      throw Error(ErrorCode::Config, "vote weights must not all be zero");
    }
    if (!(bin > 0.0) || bin > 1.0) {
      throw Error(ErrorCode::Config, "vote bin must be in (0,1]");
    }
  }
};

/// Weighted vote over the present streams. Discretized mode quantizes each
/// input before averaging; both modes quantize the final result. An absent
/// local stream drops out and the remaining weights renormalize.
inline double vote(const StreamScores& scores, const VoteConfig& cfg) {
  cfg.validate();
  double num = 0.0;
  double den = 0.0;
  auto add = [&](double s, double w) {
    if (w <= 0.0) return;
    const double v = cfg.mode == VoteMode::Discretized ? quantize_score(s, cfg.bin) : s;
    num += w * v;
    den += w;
  };
  if (scores.local) add(*scores.local, cfg.w_local);
  add(scores.global, cfg.w_global);
  add(scores.fusion, cfg.w_fusion);
  if (den <= 0.0) {
    throw Error(ErrorCode::NoStreams, "no stream present with positive weight");
  }
  return quantize_score(num / den, cfg.bin);
}

/// Per-id vote over three score tables; ids absent from `local` are voted in
/// bypass mode. global/fusion must cover the same ids; local a subset.
inline ScoreTable vote_table(const ScoreTable& local, const ScoreTable& global_t,
                             const ScoreTable& fusion_t, const VoteConfig& cfg) {
  cfg.validate();
  std::set<std::string> diff;
  for (const auto& [id, s] : global_t)
    if (!fusion_t.count(id)) diff.insert(id);
  for (const auto& [id, s] : fusion_t)
    if (!global_t.count(id)) diff.insert(id);
  if (!diff.empty()) {
    std::string msg = "global/fusion id sets differ:";
    for (const auto& id : diff) msg += " " + id;
    throw Error(ErrorCode::IdMismatch, msg);
  }
  for (const auto& [id, s] : local) {
    if (!global_t.count(id)) {
      throw Error(ErrorCode::IdMismatch, "local id not in global/fusion tables: " + id);
    }
  }
  ScoreTable out;
  for (const auto& [id, g] : global_t) {
    StreamScores s;
    s.image_id = id;
    auto it = local.find(id);
    if (it != local.end()) s.local = it->second;
    s.global = g;
    s.fusion = fusion_t.at(id);
    out[id] = vote(s, cfg);
  }
  return out;
}

}  // namespace patina::ensemble
