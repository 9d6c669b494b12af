#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "patina/degrade/catalog.hpp"
#include "patina/error.hpp"
#include "patina/rng.hpp"

namespace patina::degrade {

/// One operation with every random parameter pinned to a number. Per-sample
/// noise draws are the only randomness left and those re-derive from the
/// plan seed (see engine.hpp).
struct ResolvedOp {
  std::string op_id;
  std::map<std::string, double> params;  // ordered keys -> stable JSON

  double param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) {
      throw Error(ErrorCode::MissingParam, op_id + ": missing param '" + name + "'");
    }
    if (!std::isfinite(it->second)) {
      throw Error(ErrorCode::MissingParam, op_id + ": param '" + name + "' not finite");
    }
    return it->second;
  }
};

struct PipelinePlan {
  std::vector<ResolvedOp> preloop;  // alternating jpeg_compress / random_rescale
  std::vector<ResolvedOp> main;     // length <= 15
  uint64_t seed = 0;
  double severity = 0.0;

  bool empty() const { return preloop.empty() && main.empty(); }
};

inline double lerp(double a, double b, double s) { return a + (b - a) * s; }

/// Inclusion-probability gate: 0 at severity 0, saturating at 0.5.
inline double severity_gate(double severity) { return std::min(1.0, 2.0 * severity); }

namespace detail {

inline double draw_strength(Rng& rng, const OpSpec& spec, double severity) {
  const double hi = std::max(spec.strength_lo, std::min(spec.strength_hi, severity));
  return rng.uniform(spec.strength_lo, hi);
}

/// Resolve one op's parameters at strength s. The draw order below is part
/// of the sampling contract; reordering it changes sampled plans.
inline ResolvedOp resolve_op(const std::string& op_id, double s, Rng& rng,
                             uint32_t img_w, uint32_t img_h) {
  ResolvedOp op;
  op.op_id = op_id;
  auto& p = op.params;
  p["strength"] = s;

  if (op_id == "jpeg_compress") {
    p["quality"] = std::lround(lerp(90.0, 5.0, s));
    const int subs[3] = {444, 422, 420};
    p["subsampling"] = subs[rng.uniform_int(0, 2)];
  } else if (op_id == "chroma_subsample") {
    p["factor"] = rng.uniform_int(0, 1) == 0 ? 2 : 4;
  } else if (op_id == "color_banding") {
    p["levels"] = std::lround(lerp(64.0, 4.0, s));
  } else if (op_id == "random_rescale") {
    p["factor"] = rng.uniform(lerp(0.9, 0.25, s), 1.1);
    p["mode"] = static_cast<double>(rng.uniform_int(0, 2));  // down and back up
  } else if (op_id == "gaussian_noise") {
    p["sigma"] = lerp(0.005, 0.12, s);
  } else if (op_id == "speckle_noise") {
    p["sigma"] = lerp(0.01, 0.25, s);
  } else if (op_id == "poisson_noise") {
    p["scale"] = lerp(255.0, 20.0, s);
  } else if (op_id == "h264_glitch") {
    p["prob"] = lerp(0.01, 0.15, s);
  } else if (op_id == "anisotropic_smooth") {
    p["sigma_x"] = rng.uniform(0.3, lerp(0.8, 5.0, s));
    p["sigma_y"] = rng.uniform(0.3, lerp(0.8, 5.0, s));
  } else if (op_id == "motion_blur") {
    const double l = lerp(3.0, 21.0, s);
    p["length"] = 2.0 * std::lround((l - 1.0) / 2.0) + 1.0;  // nearest odd
    p["angle"] = rng.uniform(0.0, 3.14159265358979323846);
  } else if (op_id == "chromatic_aberration") {
    p["shift"] = std::lround(lerp(1.0, 6.0, s));
  } else if (op_id == "vignette") {
    p["amount"] = lerp(0.1, 0.8, s);
  } else if (op_id == "color_cast") {
    const double a = lerp(0.05, 0.4, s);
    p["gain_r"] = rng.uniform(1.0 - a, 1.0 + a);
    p["gain_g"] = rng.uniform(1.0 - a, 1.0 + a);
    p["gain_b"] = rng.uniform(1.0 - a, 1.0 + a);
  } else if (op_id == "moire") {
    p["amplitude"] = lerp(0.02, 0.2, s);
    p["freq_x"] = rng.uniform(0.05, 0.45);
    p["freq_y"] = rng.uniform(0.05, 0.45);
    p["phase"] = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  } else if (op_id == "text_patch_overlay") {
    const double w = img_w, h = img_h;
    const long count = std::lround(lerp(1.0, 6.0, s));
    double budget = lerp(0.01, 0.10, s) * w * h;  // total covered area, px^2
    p["count"] = static_cast<double>(count);
    for (long i = 0; i < count; ++i) {
      const std::string k = "p" + std::to_string(i) + "_";
      const long kind = rng.uniform_int(0, 1);  // 0 rect, 1 segment
      p[k + "kind"] = static_cast<double>(kind);
      p[k + "r"] = rng.uniform01();
      p[k + "g"] = rng.uniform01();
      p[k + "b"] = rng.uniform01();
      const double area = std::max(4.0, budget * rng.uniform(0.2, 0.6));
      if (kind == 0) {
        const double aspect = rng.uniform(0.5, 2.0);
        double pw = std::min(w, std::max(2.0, std::sqrt(area * aspect)));
        double ph = std::min(h, std::max(2.0, area / pw));
        const double x0 = rng.uniform(0.0, std::max(0.0, w - pw));
        const double y0 = rng.uniform(0.0, std::max(0.0, h - ph));
        p[k + "x0"] = std::floor(x0);
        p[k + "y0"] = std::floor(y0);
        p[k + "x1"] = std::floor(x0) + std::floor(pw);
        p[k + "y1"] = std::floor(y0) + std::floor(ph);
        p[k + "thick"] = 0.0;
        budget -= std::floor(pw) * std::floor(ph);
      } else {
        const double thick = 1.0 + std::floor(rng.uniform(0.0, 3.0));  // 1..3 px
        const double len = std::min(std::hypot(w, h), std::max(2.0, area / thick));
        const double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const double cx = rng.uniform(0.0, w);
        const double cy = rng.uniform(0.0, h);
        auto cl = [](double v, double n) { return std::min(n - 1.0, std::max(0.0, v)); };
        p[k + "x0"] = cl(cx - 0.5 * len * std::cos(ang), w);
        p[k + "y0"] = cl(cy - 0.5 * len * std::sin(ang), h);
        p[k + "x1"] = cl(cx + 0.5 * len * std::cos(ang), w);
        p[k + "y1"] = cl(cy + 0.5 * len * std::sin(ang), h);
        p[k + "thick"] = thick;
        budget -= len * thick;
      }
      budget = std::max(budget, 4.0);
    }
  } else if (op_id == "pixelate") {
    p["block"] = std::lround(lerp(2.0, 12.0, s));
  } else if (op_id == "salt_pepper") {
    p["fraction"] = lerp(0.001, 0.02, s);
  } else if (op_id == "gamma_jitter") {
    const double g = lerp(0.1, 0.8, s);
    p["gamma"] = rng.uniform(1.0 / (1.0 + g), 1.0 + g);
  } else {
    throw Error(ErrorCode::UnknownOp, "cannot resolve unknown op: " + op_id);
  }
  return op;
}

}  // namespace detail

/// Sample a fully resolved plan. Pure function of (config, severity, seed,
/// dims). Draw order: preloop pair count, preloop params, per-op inclusion
/// flags in catalog order, Fisher-Yates shuffle, then per-op parameter
/// resolution in final order. Severity 0 forces an empty plan.
inline PipelinePlan sample_plan(const DegradeConfig& cfg, double severity, uint64_t seed,
                                uint32_t img_w, uint32_t img_h) {
  if (!(std::isfinite(severity) && severity >= 0.0 && severity <= 1.0)) {
    throw Error(ErrorCode::InvalidSeverity, "severity must be in [0,1]");
  }
  cfg.validate();
  PipelinePlan plan;
  plan.seed = seed;
  plan.severity = severity;
  if (severity == 0.0) return plan;

  Rng rng(seed);

  const int pairs = static_cast<int>(rng.uniform_int(0, cfg.preloop_max_pairs));
  const OpSpec* jpeg_spec = cfg.find("jpeg_compress");
  const OpSpec* rescale_spec = cfg.find("random_rescale");
  for (int i = 0; i < pairs && jpeg_spec && rescale_spec; ++i) {
    plan.preloop.push_back(detail::resolve_op(
        "jpeg_compress", detail::draw_strength(rng, *jpeg_spec, severity), rng, img_w, img_h));
    plan.preloop.push_back(detail::resolve_op(
        "random_rescale", detail::draw_strength(rng, *rescale_spec, severity), rng, img_w, img_h));
  }

  std::vector<const OpSpec*> included;
  const double gate = severity_gate(severity);
  for (const auto& op : cfg.ops) {
    if (!op.enabled) continue;
    if (rng.uniform01() < op.base_probability * gate) included.push_back(&op);
  }
  for (size_t i = included.size(); i > 1; --i) {
    const size_t j = rng.below(i);
    std::swap(included[i - 1], included[j]);
  }
  if (included.size() > static_cast<size_t>(cfg.max_steps)) {
    included.resize(static_cast<size_t>(cfg.max_steps));
  }
  for (const OpSpec* op : included) {
    plan.main.push_back(detail::resolve_op(
        op->op_id, detail::draw_strength(rng, *op, severity), rng, img_w, img_h));
  }
  return plan;
}

}  // namespace patina::degrade
