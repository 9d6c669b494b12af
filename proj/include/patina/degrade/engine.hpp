#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "patina/degrade/ops.hpp"
#include "patina/degrade/plan.hpp"
#include "patina/image.hpp"
#include "patina/rng.hpp"
#include "patina/sha256.hpp"

namespace patina::degrade {

inline constexpr const char* kEngineVersion = "patina-0.1.0";

/// Apply a plan: preloop ops in order, then main ops in order. The k-th
/// applied op overall (0-based, preloop first) draws its per-sample noise
/// from substream seed mix64(plan.seed, k+1). Pure function of (img, plan).
inline RasterImage apply_plan(const RasterImage& img, const PipelinePlan& plan) {
  require_valid(img, "apply_plan");
  if (plan.empty()) return img;
  RasterImage cur = img;
  uint64_t index = 0;
  for (const auto* list : {&plan.preloop, &plan.main}) {
    for (const ResolvedOp& op : *list) {
      cur = apply_resolved_op(cur, op, mix64(plan.seed, index + 1));
      ++index;
    }
  }
  return cur;
}

struct ManifestRecord {
  std::string image_id;
  std::string output_sha256;  // over the 8-bit quantized RGB buffer
  PipelinePlan plan;
};

struct Manifest {
  std::string engine_version = kEngineVersion;
  uint64_t global_seed = 0;
  std::string config_digest;
  std::vector<ManifestRecord> images;
};

namespace detail {

inline nlohmann::json op_to_json(const ResolvedOp& op) {
  nlohmann::json j;
  j["op_id"] = op.op_id;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : op.params) j["params"][k] = v;
  return j;
}

inline ResolvedOp op_from_json(const nlohmann::json& j) {
  ResolvedOp op;
  op.op_id = j.at("op_id").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) {
    op.params[k] = v.get<double>();
  }
  return op;
}

inline nlohmann::json plan_to_json(const PipelinePlan& plan) {
  nlohmann::json j;
  j["seed"] = plan.seed;
  j["severity"] = plan.severity;
  j["preloop"] = nlohmann::json::array();
  for (const auto& op : plan.preloop) j["preloop"].push_back(op_to_json(op));
  j["main"] = nlohmann::json::array();
  for (const auto& op : plan.main) j["main"].push_back(op_to_json(op));
  return j;
}

inline PipelinePlan plan_from_json(const nlohmann::json& j) {
  PipelinePlan plan;
  plan.seed = j.at("seed").get<uint64_t>();
  plan.severity = j.at("severity").get<double>();
  for (const auto& o : j.at("preloop")) plan.preloop.push_back(op_from_json(o));
  for (const auto& o : j.at("main")) plan.main.push_back(op_from_json(o));
  return plan;
}

}  // namespace detail

inline std::string manifest_to_json(const Manifest& m) {
  nlohmann::json j;
  j["engine_version"] = m.engine_version;
  j["global_seed"] = m.global_seed;
  j["config_digest"] = m.config_digest;
  j["images"] = nlohmann::json::array();
  for (const auto& rec : m.images) {
    nlohmann::json r;
    r["image_id"] = rec.image_id;
    r["output_sha256"] = rec.output_sha256;
    r["plan"] = detail::plan_to_json(rec.plan);
    j["images"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

inline Manifest manifest_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    Manifest m;
    m.engine_version = j.at("engine_version").get<std::string>();
    m.global_seed = j.at("global_seed").get<uint64_t>();
    m.config_digest = j.at("config_digest").get<std::string>();
    for (const auto& r : j.at("images")) {
      ManifestRecord rec;
      rec.image_id = r.at("image_id").get<std::string>();
      rec.output_sha256 = r.at("output_sha256").get<std::string>();
      rec.plan = detail::plan_from_json(r.at("plan"));
      m.images.push_back(std::move(rec));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedData, std::string("manifest: ") + e.what());
  }
}

/// Seed for one image's plan. Depends only on (global_seed, image_id), so
/// batch results are independent of processing order and thread count.
inline uint64_t per_image_seed(uint64_t global_seed, const std::string& image_id) {
  return mix64(global_seed, fnv1a64(image_id));
}

inline std::string output_digest(const RasterImage& img) {
  return sha256_hex(quantize_rgb8(img));
}

/// Degrade a batch. Returns outputs in input order plus the manifest.
/// `jobs` <= 1 runs inline; otherwise a small claim-by-index thread pool.
inline std::pair<std::vector<RasterImage>, Manifest> degrade_batch(
    const std::vector<std::pair<std::string, RasterImage>>& images,
    const DegradeConfig& config, double severity, uint64_t global_seed,
    unsigned jobs = 1) {
  config.validate();
  {
    std::unordered_set<std::string> seen;
    for (const auto& [id, img] : images) {
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::DuplicateImageId, "duplicate image_id: " + id);
      }
    }
  }

  Manifest manifest;
  manifest.global_seed = global_seed;
  manifest.config_digest = config_digest(config);
  manifest.images.resize(images.size());
  std::vector<RasterImage> outputs(images.size());

  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= images.size()) return;
      try {
        const auto& [id, img] = images[i];
        const uint64_t seed = per_image_seed(global_seed, id);
        PipelinePlan plan = sample_plan(config, severity, seed, img.width, img.height);
        RasterImage out = apply_plan(img, plan);
        manifest.images[i] =
            ManifestRecord{id, output_digest(out), std::move(plan)};
        outputs[i] = std::move(out);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(images.size());  // drain remaining work
        return;
      }
    }
  };

  const unsigned n_threads =
      std::min<size_t>(images.size(), std::max(1u, jobs));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return {std::move(outputs), std::move(manifest)};
}

/// Re-run one recorded plan. Bit-identical to the original batch output;
/// callers compare output_digest() against record.output_sha256.
inline RasterImage replay(const RasterImage& img, const ManifestRecord& record) {
  return apply_plan(img, record.plan);
}

}  // namespace patina::degrade
