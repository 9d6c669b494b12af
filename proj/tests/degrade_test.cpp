#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "patina/degrade/catalog.hpp"
#include "patina/degrade/engine.hpp"
#include "patina/degrade/ops.hpp"
#include "patina/degrade/plan.hpp"
#include "patina/quality.hpp"
#include "testutil.hpp"

using namespace patina;
using namespace patina::degrade;

TEST(Catalog, HasEighteenOpsInFourCategories) {
  const auto ops = op_catalog();
  ASSERT_EQ(ops.size(), 18u);

  std::map<OpCategory, int> per_category;
  std::set<std::string> ids;
  for (const auto& op : ops) {
    per_category[op.category]++;
    EXPECT_TRUE(ids.insert(op.op_id).second) << "duplicate op_id " << op.op_id;
  }
  EXPECT_EQ(per_category.size(), 4u);
  EXPECT_EQ(per_category[OpCategory::CompressionResampling], 5);
  EXPECT_EQ(per_category[OpCategory::SensorNoise], 5);
  EXPECT_EQ(per_category[OpCategory::OpticalBlur], 4);
  EXPECT_EQ(per_category[OpCategory::PhotometricDistractor], 4);

  // Fixed order: the four named blocks first, then the three fillers.
  EXPECT_EQ(ops[0].op_id, "jpeg_compress");
  EXPECT_EQ(ops[4].op_id, "gaussian_noise");
  EXPECT_EQ(ops[8].op_id, "anisotropic_smooth");
  EXPECT_EQ(ops[12].op_id, "color_cast");
  EXPECT_EQ(ops[15].op_id, "pixelate");
  EXPECT_EQ(ops[17].op_id, "gamma_jitter");
  for (size_t i = 0; i < ops.size(); ++i) {
    EXPECT_EQ(ops[i].catalog_filler, i >= 15) << ops[i].op_id;
  }
}

TEST(Catalog, ConfigJsonRoundTripAndDigest) {
  DegradeConfig cfg;
  cfg.ops[3].base_probability = 0.5;
  cfg.ops[7].enabled = false;
  cfg.preloop_max_pairs = 2;

  const DegradeConfig back = config_from_json(config_to_json(cfg));
  ASSERT_EQ(back.ops.size(), cfg.ops.size());
  for (size_t i = 0; i < cfg.ops.size(); ++i) {
    EXPECT_EQ(back.ops[i].op_id, cfg.ops[i].op_id);
    EXPECT_EQ(back.ops[i].enabled, cfg.ops[i].enabled);
    EXPECT_DOUBLE_EQ(back.ops[i].base_probability, cfg.ops[i].base_probability);
    EXPECT_DOUBLE_EQ(back.ops[i].strength_lo, cfg.ops[i].strength_lo);
    EXPECT_DOUBLE_EQ(back.ops[i].strength_hi, cfg.ops[i].strength_hi);
  }
  EXPECT_EQ(back.preloop_max_pairs, 2);

  // Digest is a pure function of the config contents.
  EXPECT_EQ(config_digest(cfg), config_digest(back));
  EXPECT_NE(config_digest(cfg), config_digest(DegradeConfig{}));
  EXPECT_EQ(config_digest(DegradeConfig{}), config_digest(DegradeConfig{}));
}

TEST(Catalog, UnknownOpInConfigRejected) {
  nlohmann::json j = config_to_json(DegradeConfig{});
  j["ops"][0]["op_id"] = "quantum_entangle";
  try {
    config_from_json(j);
    FAIL() << "expected Config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
}

TEST(Plan, SeverityZeroIsEmptyAndBitExact) {
  const DegradeConfig cfg;
  PipelinePlan plan = sample_plan(cfg, 0.0, 1234, 64, 64);
  EXPECT_TRUE(plan.empty());
  EXPECT_EQ(plan.severity, 0.0);

  RasterImage img = testutil::make_natural(48, 36, 9);
  EXPECT_TRUE(apply_plan(img, plan) == img);
}

TEST(Plan, SeverityOutsideRangeRejected) {
  const DegradeConfig cfg;
  for (double s : {-0.1, 1.5, std::nan("")}) {
    try {
      sample_plan(cfg, s, 1, 64, 64);
      FAIL() << "severity " << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidSeverity);
    }
  }
}

TEST(Plan, SameSeedGivesIdenticalPlan) {
  const DegradeConfig cfg;
  PipelinePlan a = sample_plan(cfg, 0.7, 555, 128, 96);
  PipelinePlan b = sample_plan(cfg, 0.7, 555, 128, 96);
  ASSERT_EQ(a.preloop.size(), b.preloop.size());
  ASSERT_EQ(a.main.size(), b.main.size());
  auto same_op = [](const ResolvedOp& x, const ResolvedOp& y) {
    if (x.op_id != y.op_id || x.params.size() != y.params.size()) return false;
    for (const auto& [k, v] : x.params) {
      auto it = y.params.find(k);
      if (it == y.params.end() || it->second != v) return false;
    }
    return true;
  };
  for (size_t i = 0; i < a.preloop.size(); ++i) EXPECT_TRUE(same_op(a.preloop[i], b.preloop[i]));
  for (size_t i = 0; i < a.main.size(); ++i) EXPECT_TRUE(same_op(a.main[i], b.main[i]));

  PipelinePlan c = sample_plan(cfg, 0.7, 556, 128, 96);
  bool differs = c.preloop.size() != a.preloop.size() || c.main.size() != a.main.size();
  if (!differs) {
    for (size_t i = 0; i < a.main.size() && !differs; ++i) {
      differs = !same_op(a.main[i], c.main[i]);
    }
  }
  EXPECT_TRUE(differs) << "different seeds should not produce identical plans";
}

TEST(Plan, MonteCarloBoundsAndMeanCount) {
  const DegradeConfig cfg;
  // Expected main-op count at severity 1.0, computed from the config itself.
  double expected = 0.0;
  const double gate = severity_gate(1.0);
  for (const auto& op : cfg.ops) {
    if (op.enabled) expected += op.base_probability * gate;
  }

  const int n = 10000;
  double total_main = 0.0;
  size_t max_main = 0, max_preloop = 0;
  for (int i = 0; i < n; ++i) {
    PipelinePlan plan = sample_plan(cfg, 1.0, 100000 + static_cast<uint64_t>(i), 64, 64);
    total_main += static_cast<double>(plan.main.size());
    max_main = std::max(max_main, plan.main.size());
    max_preloop = std::max(max_preloop, plan.preloop.size());
    ASSERT_EQ(plan.preloop.size() % 2, 0u);
  }
  EXPECT_LE(max_main, 15u);
  EXPECT_LE(max_preloop, 10u);  // 5 jpeg+rescale pairs
  EXPECT_NEAR(total_main / n, expected, 0.5);
}

TEST(Plan, PreloopAlternatesJpegAndRescale) {
  const DegradeConfig cfg;
  bool saw_preloop = false;
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    PipelinePlan plan = sample_plan(cfg, 0.8, seed, 64, 64);
    for (size_t i = 0; i < plan.preloop.size(); ++i) {
      EXPECT_EQ(plan.preloop[i].op_id, i % 2 == 0 ? "jpeg_compress" : "random_rescale");
      saw_preloop = true;
    }
  }
  EXPECT_TRUE(saw_preloop);
}

// At minimum strength every op should be a gentle touch. The bound holds for
// the op's most favorable draw, so we take the best PSNR over a few substream
// seeds. Shot noise at scale 255 has PSNR fixed at 10*log10(255/mean) by
// construction, so poisson_noise needs a low-light fixture (mean < 0.255).
TEST(Ops, MinimalStrengthIsGentle) {
  const RasterImage bright = testutil::make_natural(96, 96, 77, 0.45f);
  const RasterImage dim = testutil::make_natural(96, 96, 77, 0.12f);
  for (const auto& spec : op_catalog()) {
    const RasterImage& img = spec.op_id == "poisson_noise" ? dim : bright;
    double best = -1e9;
    for (uint64_t seed = 1; seed <= 16; ++seed) {
      Rng rng(seed * 1000);
      ResolvedOp op =
          degrade::detail::resolve_op(spec.op_id, 0.0, rng, img.width, img.height);
      RasterImage out = apply_resolved_op(img, op, mix64(seed, 1));
      ASSERT_TRUE(out.width > 0 && out.height > 0);
      if (out.same_dims(img)) best = std::max(best, psnr(img, out));
    }
    EXPECT_GE(best, 30.0) << spec.op_id;
  }
}

TEST(Ops, ColorBandingTwoLevelsRoundsToExtremes) {
  RasterImage img = testutil::constant_image(4, 4, 0.6f, 0.2f, 0.5f);
  ResolvedOp op;
  op.op_id = "color_banding";
  op.params["levels"] = 2.0;
  RasterImage out = apply_resolved_op(img, op, 1);
  for (uint32_t y = 0; y < out.height; ++y) {
    for (uint32_t x = 0; x < out.width; ++x) {
      EXPECT_FLOAT_EQ(out.at(x, y, 0), 1.0f);  // 0.6 rounds up
      EXPECT_FLOAT_EQ(out.at(x, y, 1), 0.0f);  // 0.2 rounds down
      EXPECT_FLOAT_EQ(out.at(x, y, 2), 1.0f);  // 0.5 rounds half away from zero
    }
  }
}

TEST(Ops, VignetteDarkensCornersNotCenter) {
  RasterImage img = testutil::constant_image(33, 21, 0.8f, 0.8f, 0.8f);
  ResolvedOp op;
  op.op_id = "vignette";
  op.params["amount"] = 0.5;
  RasterImage out = apply_resolved_op(img, op, 1);
  // Odd dims put the exact center on a pixel; gain there is 1.
  EXPECT_NEAR(out.at(16, 10, 0), 0.8f, 1e-6);
  // Corners sit at the max radius; gain there is 1 - amount.
  EXPECT_NEAR(out.at(0, 0, 0), 0.4f, 1e-6);
  EXPECT_NEAR(out.at(32, 20, 2), 0.4f, 1e-6);
}

TEST(Ops, UnknownOpRejected) {
  RasterImage img = testutil::constant_image(4, 4, 0.5f, 0.5f, 0.5f);
  ResolvedOp op;
  op.op_id = "not_an_op";
  try {
    apply_resolved_op(img, op, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownOp);
  }
}

TEST(Engine, ManifestJsonRoundTrip) {
  const DegradeConfig cfg;
  std::vector<std::pair<std::string, RasterImage>> images;
  for (int i = 0; i < 3; ++i) {
    images.emplace_back("img" + std::to_string(i),
                        testutil::make_natural(40, 32, 500 + static_cast<uint64_t>(i)));
  }
  auto [outputs, manifest] = degrade_batch(images, cfg, 0.6, 42);
  ASSERT_EQ(manifest.images.size(), 3u);
  EXPECT_EQ(manifest.engine_version, kEngineVersion);
  EXPECT_EQ(manifest.global_seed, 42u);

  const std::string text = manifest_to_json(manifest);
  const Manifest back = manifest_from_json(text);
  EXPECT_EQ(back.engine_version, manifest.engine_version);
  EXPECT_EQ(back.global_seed, manifest.global_seed);
  EXPECT_EQ(back.config_digest, manifest.config_digest);
  ASSERT_EQ(back.images.size(), manifest.images.size());
  for (size_t i = 0; i < back.images.size(); ++i) {
    EXPECT_EQ(back.images[i].image_id, manifest.images[i].image_id);
    EXPECT_EQ(back.images[i].output_sha256, manifest.images[i].output_sha256);
    EXPECT_EQ(back.images[i].plan.seed, manifest.images[i].plan.seed);
    EXPECT_EQ(back.images[i].plan.severity, manifest.images[i].plan.severity);
    ASSERT_EQ(back.images[i].plan.main.size(), manifest.images[i].plan.main.size());
    for (size_t k = 0; k < back.images[i].plan.main.size(); ++k) {
      EXPECT_EQ(back.images[i].plan.main[k].op_id, manifest.images[i].plan.main[k].op_id);
      EXPECT_EQ(back.images[i].plan.main[k].params, manifest.images[i].plan.main[k].params);
    }
  }

  // Serialization is stable: serializing the round-tripped manifest again
  // yields the same bytes.
  EXPECT_EQ(manifest_to_json(back), text);
}

TEST(Engine, MalformedManifestRejected) {
  EXPECT_THROW(manifest_from_json("this is not json"), Error);
  EXPECT_THROW(manifest_from_json("{}"), Error);
  try {
    manifest_from_json(R"({"engine_version":"x","global_seed":"not a number"})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedData);
  }
}

TEST(Engine, DuplicateImageIdRejected) {
  const DegradeConfig cfg;
  RasterImage img = testutil::constant_image(8, 8, 0.5f, 0.5f, 0.5f);
  std::vector<std::pair<std::string, RasterImage>> images = {{"a", img}, {"a", img}};
  try {
    degrade_batch(images, cfg, 0.4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateImageId);
  }
}

TEST(Engine, BatchIsOrderAndThreadCountInvariant) {
  const DegradeConfig cfg;
  std::vector<std::pair<std::string, RasterImage>> images;
  for (int i = 0; i < 8; ++i) {
    images.emplace_back("img" + std::to_string(i),
                        testutil::make_natural(48, 40, 900 + static_cast<uint64_t>(i)));
  }

  auto [out1, man1] = degrade_batch(images, cfg, 0.5, 7, 1);
  auto [out4, man4] = degrade_batch(images, cfg, 0.5, 7, 4);
  for (size_t i = 0; i < images.size(); ++i) {
    EXPECT_TRUE(out1[i] == out4[i]) << images[i].first;
    EXPECT_EQ(man1.images[i].output_sha256, man4.images[i].output_sha256);
  }

  std::vector<std::pair<std::string, RasterImage>> reversed(images.rbegin(), images.rend());
  auto [outr, manr] = degrade_batch(reversed, cfg, 0.5, 7, 2);
  for (size_t i = 0; i < images.size(); ++i) {
    const size_t j = images.size() - 1 - i;
    EXPECT_EQ(manr.images[j].image_id, man1.images[i].image_id);
    EXPECT_EQ(manr.images[j].output_sha256, man1.images[i].output_sha256);
    EXPECT_TRUE(outr[j] == out1[i]);
  }
}

TEST(Engine, ReplayReproducesRecordedDigest) {
  const DegradeConfig cfg;
  std::vector<std::pair<std::string, RasterImage>> images;
  for (int i = 0; i < 4; ++i) {
    images.emplace_back("face_" + std::to_string(i),
                        testutil::make_natural(56, 44, 40 + static_cast<uint64_t>(i)));
  }
  auto [outputs, manifest] = degrade_batch(images, cfg, 0.7, 99);

  for (size_t i = 0; i < images.size(); ++i) {
    RasterImage again = replay(images[i].second, manifest.images[i]);
    EXPECT_TRUE(again == outputs[i]);
    EXPECT_EQ(output_digest(again), manifest.images[i].output_sha256);
  }

  // Tampering with a recorded parameter must change the produced digest.
  ManifestRecord tampered = manifest.images[0];
  ASSERT_FALSE(tampered.plan.main.empty() && tampered.plan.preloop.empty());
  auto& ops = tampered.plan.main.empty() ? tampered.plan.preloop : tampered.plan.main;
  ops[0].params.begin()->second += 0.37;
  RasterImage forged = replay(images[0].second, tampered);
  EXPECT_NE(output_digest(forged), manifest.images[0].output_sha256);
}

TEST(Engine, PerImageSeedDependsOnId) {
  EXPECT_NE(per_image_seed(1, "a"), per_image_seed(1, "b"));
  EXPECT_NE(per_image_seed(1, "a"), per_image_seed(2, "a"));
  EXPECT_EQ(per_image_seed(123, "face_01"), per_image_seed(123, "face_01"));
}
