#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "patina/error.hpp"
#include "patina/sha256.hpp"

namespace patina::degrade {

enum class OpCategory {
  CompressionResampling,
  SensorNoise,
  OpticalBlur,
  PhotometricDistractor,
};

inline const char* category_name(OpCategory c) {
  switch (c) {
    case OpCategory::CompressionResampling: return "compression_resampling";
    case OpCategory::SensorNoise: return "sensor_noise";
    case OpCategory::OpticalBlur: return "optical_blur";
    case OpCategory::PhotometricDistractor: return "photometric_distractor";
  }
  return "?";
}

struct OpSpec {
  std::string op_id;
  OpCategory category;
  double base_probability = 0.35;
  double strength_lo = 0.0;
  double strength_hi = 1.0;
  bool enabled = true;
  // Ops 16-18 fill the pool out to its full size without a named source;
  // they are flagged so reports can distinguish them.
  bool catalog_filler = false;
};

/// The fixed 18-operation pool, in catalog order. Per-op parameter formulas
/// live with each op's implementation in ops.hpp.
inline std::vector<OpSpec> op_catalog() {
  using C = OpCategory;
  auto op = [](const char* id, C cat, bool filler = false) {
    OpSpec s;
    s.op_id = id;
    s.category = cat;
    s.catalog_filler = filler;
    return s;
  };
  return {
      op("jpeg_compress", C::CompressionResampling),
      op("chroma_subsample", C::CompressionResampling),
      op("color_banding", C::CompressionResampling),
      op("random_rescale", C::CompressionResampling),
      op("gaussian_noise", C::SensorNoise),
      op("speckle_noise", C::SensorNoise),
      op("poisson_noise", C::SensorNoise),
      op("h264_glitch", C::SensorNoise),
      op("anisotropic_smooth", C::OpticalBlur),
      op("motion_blur", C::OpticalBlur),
      op("chromatic_aberration", C::OpticalBlur),
      op("vignette", C::OpticalBlur),
      op("color_cast", C::PhotometricDistractor),
      op("moire", C::PhotometricDistractor),
      op("text_patch_overlay", C::PhotometricDistractor),
      op("pixelate", C::CompressionResampling, true),
      op("salt_pepper", C::SensorNoise, true),
      op("gamma_jitter", C::PhotometricDistractor, true),
  };
}

struct DegradeConfig {
  std::vector<OpSpec> ops = op_catalog();
  int preloop_max_pairs = 5;
  int max_steps = 15;

  const OpSpec* find(const std::string& op_id) const {
    for (const auto& o : ops)
      if (o.op_id == op_id) return &o;
    return nullptr;
  }

  void validate() const {
    if (preloop_max_pairs < 0 || preloop_max_pairs > 5) {
      throw Error(ErrorCode::Config, "preloop_max_pairs must be in 0..5");
    }
    if (max_steps < 0 || max_steps > 15) {
      throw Error(ErrorCode::Config, "max_steps must be in 0..15");
    }
    for (const auto& o : ops) {
      if (o.base_probability < 0.0 || o.base_probability > 1.0) {
        throw Error(ErrorCode::Config, o.op_id + ": base_probability outside [0,1]");
      }
      if (!(0.0 <= o.strength_lo && o.strength_lo <= o.strength_hi && o.strength_hi <= 1.0)) {
        throw Error(ErrorCode::Config, o.op_id + ": strength range must satisfy 0 <= lo <= hi <= 1");
      }
    }
  }
};

inline nlohmann::json config_to_json(const DegradeConfig& cfg) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& o : cfg.ops) {
    ops.push_back({{"op_id", o.op_id},
                   {"enabled", o.enabled},
                   {"base_probability", o.base_probability},
                   {"strength_lo", o.strength_lo},
                   {"strength_hi", o.strength_hi}});
  }
  return {{"ops", ops},
          {"preloop_max_pairs", cfg.preloop_max_pairs},
          {"max_steps", cfg.max_steps}};
}

/// Parse a config JSON. Entries override the catalog defaults by op_id;
/// unknown ids and out-of-range values are config errors.
inline DegradeConfig config_from_json(const nlohmann::json& j) {
  DegradeConfig cfg;
  try {
    if (j.contains("preloop_max_pairs")) cfg.preloop_max_pairs = j.at("preloop_max_pairs").get<int>();
    if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<int>();
    if (j.contains("ops")) {
      for (const auto& e : j.at("ops")) {
        const std::string id = e.at("op_id").get<std::string>();
        OpSpec* spec = nullptr;
        for (auto& o : cfg.ops)
          if (o.op_id == id) spec = &o;
        if (!spec) throw Error(ErrorCode::Config, "unknown op_id in config: " + id);
        if (e.contains("enabled")) spec->enabled = e.at("enabled").get<bool>();
        if (e.contains("base_probability")) spec->base_probability = e.at("base_probability").get<double>();
        if (e.contains("strength_lo")) spec->strength_lo = e.at("strength_lo").get<double>();
        if (e.contains("strength_hi")) spec->strength_hi = e.at("strength_hi").get<double>();
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::Config, std::string("config schema violation: ") + ex.what());
  }
  cfg.validate();
  return cfg;
}

/// SHA-256 of the canonicalized (sorted-key, compact) effective config.
inline std::string config_digest(const DegradeConfig& cfg) {
  return sha256_hex(config_to_json(cfg).dump());
}

}  // namespace patina::degrade
