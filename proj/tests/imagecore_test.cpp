#include <gtest/gtest.h>

#include <cmath>

#include "patina/codec.hpp"
#include "patina/color.hpp"
#include "patina/convolve.hpp"
#include "patina/image.hpp"
#include "patina/quality.hpp"
#include "patina/resample.hpp"
#include "patina/rng.hpp"
#include "testutil.hpp"

using namespace patina;

namespace {

RasterImage decode_round_trip(const RasterImage& img, ImageFormat fmt, int quality = 90,
                              ChromaSubsampling subs = ChromaSubsampling::S420) {
  return decode_image(encode_image(img, fmt, quality, subs));
}

}  // namespace

TEST(Codec, PngWhiteAndBlackSinglePixel) {
  RasterImage white = testutil::constant_image(1, 1, 1.0f, 1.0f, 1.0f);
  RasterImage out = decode_round_trip(white, ImageFormat::PNG);
  ASSERT_EQ(out.width, 1u);
  ASSERT_EQ(out.height, 1u);
  for (float v : out.data) EXPECT_FLOAT_EQ(v, 1.0f);

  RasterImage black = testutil::constant_image(1, 1, 0.0f, 0.0f, 0.0f);
  out = decode_round_trip(black, ImageFormat::PNG);
  for (float v : out.data) EXPECT_FLOAT_EQ(v, 0.0f);
}

TEST(Codec, PngPreservesExactByteValues) {
  RasterImage img(2, 2);
  img.at(0, 0, 0) = 128.0f / 255.0f;
  img.at(0, 0, 1) = 64.0f / 255.0f;
  img.at(0, 0, 2) = 32.0f / 255.0f;
  RasterImage out = decode_round_trip(img, ImageFormat::PNG);
  EXPECT_FLOAT_EQ(out.at(0, 0, 0), 128.0f / 255.0f);
  EXPECT_FLOAT_EQ(out.at(0, 0, 1), 64.0f / 255.0f);
  EXPECT_FLOAT_EQ(out.at(0, 0, 2), 32.0f / 255.0f);
}

TEST(Codec, PngRoundTripIsExactAt8Bit) {
  RasterImage img = testutil::make_natural(37, 23, 99);
  // Snap to the 8-bit lattice first; PNG must then round-trip bit-exactly.
  for (float& v : img.data) v = from_u8(to_u8(v));
  RasterImage out = decode_round_trip(img, ImageFormat::PNG);
  EXPECT_TRUE(out == img);
}

TEST(Codec, JpegLowQualityIsLossy) {
  RasterImage img = testutil::make_natural(64, 64, 5);
  RasterImage out = decode_round_trip(img, ImageFormat::JPEG, 5);
  ASSERT_TRUE(out.same_dims(img));
  double mae = 0.0;
  for (size_t i = 0; i < img.sample_count(); ++i) {
    mae += std::abs(static_cast<double>(img.data[i]) - out.data[i]);
  }
  mae /= static_cast<double>(img.sample_count());
  EXPECT_GT(mae, 0.0);
}

TEST(Codec, JpegHighQualityNearlyPreservesUniformGray) {
  RasterImage img = testutil::constant_image(16, 16, 0.5f, 0.5f, 0.5f);
  RasterImage out = decode_round_trip(img, ImageFormat::JPEG, 90);
  for (size_t i = 0; i < img.sample_count(); ++i) {
    EXPECT_LE(std::abs(static_cast<double>(img.data[i]) - out.data[i]), 2.0 / 255.0);
  }
}

TEST(Codec, JpegQualityOutOfRangeRejected) {
  RasterImage img = testutil::constant_image(4, 4, 0.5f, 0.5f, 0.5f);
  EXPECT_THROW(encode_image(img, ImageFormat::JPEG, 0), Error);
  EXPECT_THROW(encode_image(img, ImageFormat::JPEG, 101), Error);
}

TEST(Codec, UndecodableBytesRejected) {
  std::vector<uint8_t> garbage = {'n', 'o', 't', ' ', 'a', 'n', ' ', 'i', 'm', 'g'};
  EXPECT_THROW(decode_image(garbage), Error);
}

TEST(Color, WhiteBlackAndRedMapToKnownYcbcr) {
  RasterImage img(3, 1);
  img.at(0, 0, 0) = 1.0f;
  img.at(0, 0, 1) = 1.0f;
  img.at(0, 0, 2) = 1.0f;
  img.at(2, 0, 0) = 1.0f;  // pure red at x=2
  RasterImage ycc = to_ycbcr(img);

  EXPECT_NEAR(ycc.at(0, 0, 0), 1.0f, 1e-6);
  EXPECT_NEAR(ycc.at(0, 0, 1), 0.5f, 1e-6);
  EXPECT_NEAR(ycc.at(0, 0, 2), 0.5f, 1e-6);

  EXPECT_NEAR(ycc.at(1, 0, 0), 0.0f, 1e-6);
  EXPECT_NEAR(ycc.at(1, 0, 1), 0.5f, 1e-6);
  EXPECT_NEAR(ycc.at(1, 0, 2), 0.5f, 1e-6);

  // Red: Y = 0.299; Cb = 0.5 - 0.299/1.772; Cr = 0.5 + 0.701/1.402, which
  // the defining formulas make exactly 1.0 (1.402 = 2 * 0.701).
  EXPECT_NEAR(ycc.at(2, 0, 0), 0.299f, 1e-6);
  EXPECT_NEAR(ycc.at(2, 0, 1), 0.5 - 0.299 / 1.772, 1e-6);
  EXPECT_NEAR(ycc.at(2, 0, 2), 1.0f, 1e-6);
}

TEST(Color, RoundTripWithinTolerance) {
  RasterImage img = testutil::make_natural(40, 30, 7);
  RasterImage back = from_ycbcr(to_ycbcr(img));
  for (size_t i = 0; i < img.sample_count(); ++i) {
    EXPECT_NEAR(back.data[i], img.data[i], 1e-6);
  }
}

TEST(Resample, IdentityIsBitExactForAllModes) {
  RasterImage img = testutil::make_natural(33, 17, 3);
  for (ResampleMode mode :
       {ResampleMode::Nearest, ResampleMode::Bilinear, ResampleMode::Bicubic}) {
    RasterImage out = resize(img, img.width, img.height, mode);
    EXPECT_TRUE(out == img) << resample_mode_name(mode);
  }
}

TEST(Resample, CheckerboardCollapsesToMean) {
  RasterImage img(2, 2);
  img.at(0, 0, 0) = img.at(0, 0, 1) = img.at(0, 0, 2) = 0.0f;
  img.at(1, 0, 0) = img.at(1, 0, 1) = img.at(1, 0, 2) = 1.0f;
  img.at(0, 1, 0) = img.at(0, 1, 1) = img.at(0, 1, 2) = 1.0f;
  img.at(1, 1, 0) = img.at(1, 1, 1) = img.at(1, 1, 2) = 0.0f;
  RasterImage out = resize(img, 1, 1, ResampleMode::Bilinear);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(0, 0, c), 0.5f, 1e-6);
}

TEST(Resample, ConstantStaysConstantAcrossScales) {
  RasterImage img = testutil::constant_image(13, 9, 0.7f, 0.7f, 0.7f);
  for (ResampleMode mode :
       {ResampleMode::Nearest, ResampleMode::Bilinear, ResampleMode::Bicubic}) {
    for (auto [w, h] : {std::pair<uint32_t, uint32_t>{1, 1},
                        {4, 7},
                        {13, 9},
                        {26, 18},
                        {52, 3}}) {
      RasterImage out = resize(img, w, h, mode);
      for (float v : out.data) {
        EXPECT_NEAR(v, 0.7f, 1e-6) << resample_mode_name(mode) << " " << w << "x" << h;
      }
    }
  }
}

TEST(Convolve, DeltaKernelIsIdentity) {
  RasterImage img = testutil::make_natural(21, 14, 11);
  Kernel2D k(1, 1);
  k.at(0, 0) = 1.0;
  EXPECT_TRUE(convolve(img, k) == img);

  Kernel2D k3(3, 3);
  k3.at(1, 1) = 1.0;
  RasterImage out = convolve(img, k3);
  for (size_t i = 0; i < img.sample_count(); ++i) {
    EXPECT_NEAR(out.data[i], img.data[i], 1e-6);
  }
}

TEST(Convolve, BoxKernelSpreadsImpulse) {
  RasterImage img(3, 3);
  img.at(1, 1, 0) = img.at(1, 1, 1) = img.at(1, 1, 2) = 1.0f;
  Kernel2D k(3, 3);
  for (double& w : k.weights) w = 1.0 / 9.0;
  RasterImage out = convolve(img, k);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(1, 1, c), 1.0f / 9.0f, 1e-6);
}

TEST(Convolve, NormalizedKernelPreservesConstant) {
  RasterImage img = testutil::constant_image(8, 8, 0.42f, 0.42f, 0.42f);
  Kernel2D k(5, 3);
  Rng rng(404);
  double sum = 0.0;
  for (double& w : k.weights) {
    w = rng.uniform01();
    sum += w;
  }
  for (double& w : k.weights) w /= sum;
  RasterImage out = convolve(img, k);
  for (float v : out.data) EXPECT_NEAR(v, 0.42f, 1e-6);
}

TEST(Psnr, KnownValuesAndCap) {
  RasterImage a = testutil::constant_image(4, 4, 0.0f, 0.0f, 0.0f);
  RasterImage ones = testutil::constant_image(4, 4, 1.0f, 1.0f, 1.0f);
  RasterImage half = testutil::constant_image(4, 4, 0.5f, 0.5f, 0.5f);

  EXPECT_DOUBLE_EQ(psnr(a, a), 99.0);
  EXPECT_NEAR(psnr(a, ones), 0.0, 1e-9);
  EXPECT_NEAR(psnr(a, half), 10.0 * std::log10(4.0), 1e-9);

  RasterImage wrong(3, 4);
  EXPECT_THROW(psnr(a, wrong), Error);
}

TEST(Image, QuantizeRgb8MatchesRounding) {
  RasterImage img(2, 1);
  img.at(0, 0, 0) = 0.5f;       // 127.5 -> 128 (lround half away)
  img.at(0, 0, 1) = 0.0f;       // 0
  img.at(0, 0, 2) = 1.0f;       // 255
  img.at(1, 0, 0) = 0.251f;     // 64.005 -> 64
  img.at(1, 0, 1) = 2.0f;       // clamped to 255
  img.at(1, 0, 2) = -0.5f;      // clamped to 0
  const auto bytes = quantize_rgb8(img);
  EXPECT_EQ(bytes[0], 128);
  EXPECT_EQ(bytes[1], 0);
  EXPECT_EQ(bytes[2], 255);
  EXPECT_EQ(bytes[3], 64);
  EXPECT_EQ(bytes[4], 255);
  EXPECT_EQ(bytes[5], 0);
}

TEST(Image, RandomOpsStayInRange) {
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    RasterImage img = testutil::make_natural(24 + trial, 18 + trial, 100 + trial);
    RasterImage r = resize(img, 11, 31, ResampleMode::Bicubic);
    for (float v : r.data) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
    RasterImage g = gaussian_blur(img, 2.0, 0.8);
    for (float v : g.data) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
  }
}
