#pragma once

#include <cmath>
#include <string>

#include "patina/codec.hpp"
#include "patina/color.hpp"
#include "patina/convolve.hpp"
#include "patina/degrade/plan.hpp"
#include "patina/image.hpp"
#include "patina/resample.hpp"
#include "patina/rng.hpp"

namespace patina::degrade {

namespace ops {

inline ResampleMode mode_from_code(double code) {
  switch (static_cast<int>(code)) {
    case 0: return ResampleMode::Nearest;
    case 1: return ResampleMode::Bilinear;
    case 2: return ResampleMode::Bicubic;
  }
  throw Error(ErrorCode::MissingParam, "resample mode code must be 0, 1 or 2");
}

inline RasterImage jpeg_compress(const RasterImage& img, const ResolvedOp& op) {
  const int quality = static_cast<int>(op.param("quality"));
  const int subs = static_cast<int>(op.param("subsampling"));
  ChromaSubsampling cs = ChromaSubsampling::S420;
  if (subs == 444) cs = ChromaSubsampling::S444;
  else if (subs == 422) cs = ChromaSubsampling::S422;
  else if (subs != 420) throw Error(ErrorCode::MissingParam, "subsampling must be 444/422/420");
  return decode_image(encode_image(img, ImageFormat::JPEG, quality, cs));
}

inline RasterImage chroma_subsample(const RasterImage& img, const ResolvedOp& op) {
  const int f = static_cast<int>(op.param("factor"));
  RasterImage ycc = to_ycbcr(img);
  const uint32_t dw = std::max(1u, (img.width + f - 1) / f);
  const uint32_t dh = std::max(1u, (img.height + f - 1) / f);
  RasterImage down = resize(ycc, dw, dh, ResampleMode::Bilinear);
  RasterImage up = resize(down, img.width, img.height, ResampleMode::Bilinear);
  for (size_t i = 0; i < ycc.pixel_count(); ++i) {
    ycc.data[i * 3 + 1] = up.data[i * 3 + 1];  // Cb
    ycc.data[i * 3 + 2] = up.data[i * 3 + 2];  // Cr
  }
  return from_ycbcr(ycc);
}

inline RasterImage color_banding(const RasterImage& img, const ResolvedOp& op) {
  const long levels = std::max(2L, static_cast<long>(op.param("levels")));
  const double steps = static_cast<double>(levels - 1);
  RasterImage out = img;
  for (float& v : out.data) {
    v = static_cast<float>(clamp01(std::round(static_cast<double>(v) * steps) / steps));
  }
  return out;
}

inline RasterImage random_rescale(const RasterImage& img, const ResolvedOp& op) {
  const double f = op.param("factor");
  const ResampleMode mode = mode_from_code(op.param("mode"));
  const uint32_t dw = std::max<long>(1, std::lround(img.width * f));
  const uint32_t dh = std::max<long>(1, std::lround(img.height * f));
  return resize(resize(img, dw, dh, mode), img.width, img.height, mode);
}

inline RasterImage gaussian_noise(const RasterImage& img, const ResolvedOp& op, Rng& rng) {
  const double sigma = op.param("sigma");
  RasterImage out = img;
  for (float& v : out.data) {
    v = static_cast<float>(clamp01(static_cast<double>(v) + rng.normal(0.0, sigma)));
  }
  return out;
}

inline RasterImage speckle_noise(const RasterImage& img, const ResolvedOp& op, Rng& rng) {
  const double sigma = op.param("sigma");
  RasterImage out = img;
  for (float& v : out.data) {
    v = static_cast<float>(clamp01(static_cast<double>(v) * (1.0 + rng.normal(0.0, sigma))));
  }
  return out;
}

inline RasterImage poisson_noise(const RasterImage& img, const ResolvedOp& op, Rng& rng) {
  const double scale = op.param("scale");
  RasterImage out = img;
  for (float& v : out.data) {
    const double lam = static_cast<double>(v) * scale;
    v = static_cast<float>(clamp01(static_cast<double>(rng.poisson(lam)) / scale));
  }
  return out;
}

// Macroblock copy/shift; mimics packet-loss artifacts, not the codec.
inline RasterImage h264_glitch(const RasterImage& img, const ResolvedOp& op, Rng& rng) {
  constexpr int kBlock = 16;
  const double prob = op.param("prob");
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  RasterImage out = img;
  for (int by = 0; by < h; by += kBlock) {
    for (int bx = 0; bx < w; bx += kBlock) {
      if (rng.uniform01() >= prob) continue;
      const bool copy_left = rng.below(2) == 0;
      const int y1 = std::min(by + kBlock, h);
      const int x1 = std::min(bx + kBlock, w);
      if (copy_left && bx >= kBlock) {
        for (int y = by; y < y1; ++y)
          for (int x = bx; x < x1; ++x)
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x - kBlock, y, c);
      } else {
        // self horizontal shift; also the edge-block fallback
        const int d = static_cast<int>(rng.uniform_int(-8, 8));
        for (int y = by; y < y1; ++y)
          for (int x = bx; x < x1; ++x) {
            const int sx = std::min(w - 1, std::max(0, x - d));
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(sx, y, c);
          }
      }
    }
  }
  return out;
}

inline RasterImage anisotropic_smooth(const RasterImage& img, const ResolvedOp& op) {
  return gaussian_blur(img, op.param("sigma_x"), op.param("sigma_y"));
}

inline RasterImage motion_blur(const RasterImage& img, const ResolvedOp& op) {
  const int len = static_cast<int>(op.param("length"));
  const double angle = op.param("angle");
  Kernel2D k(len, len);
  const double center = (len - 1) / 2.0;
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  // Bilinear splat of unit samples along the line through the kernel center.
  for (int i = 0; i < len; ++i) {
    const double t = i - center;
    const double px = center + t * dx;
    const double py = center + t * dy;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    const double wts[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
    const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
    const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
    for (int q = 0; q < 4; ++q) {
      if (xs[q] < 0 || xs[q] >= len || ys[q] < 0 || ys[q] >= len) continue;
      k.at(ys[q], xs[q]) += wts[q];
    }
  }
  double sum = 0.0;
  for (double wv : k.weights) sum += wv;
  for (double& wv : k.weights) wv /= sum;
  return convolve(img, k);
}

inline RasterImage chromatic_aberration(const RasterImage& img, const ResolvedOp& op) {
  const double d = op.param("shift");
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  RasterImage out = img;
  auto sample = [&](double sx, int y, int c) {
    const int x0 = static_cast<int>(std::floor(sx));
    const double f = sx - x0;
    const int xa = std::min(w - 1, std::max(0, x0));
    const int xb = std::min(w - 1, std::max(0, x0 + 1));
    return (1.0 - f) * img.at(xa, y, c) + f * img.at(xb, y, c);
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      out.at(x, y, 0) = static_cast<float>(clamp01(sample(x - d, y, 0)));  // R moved +d
      out.at(x, y, 2) = static_cast<float>(clamp01(sample(x + d, y, 2)));  // B moved -d
    }
  return out;
}

inline RasterImage vignette(const RasterImage& img, const ResolvedOp& op) {
  const double a = op.param("amount");
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  const double rmax2 = cx * cx + cy * cy;
  RasterImage out = img;
  if (rmax2 == 0.0) return out;  // 1x1 image: center only
  for (uint32_t y = 0; y < img.height; ++y)
    for (uint32_t x = 0; x < img.width; ++x) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const double g = 1.0 - a * (r2 / rmax2);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(clamp01(img.at(x, y, c) * g));
    }
  return out;
}

inline RasterImage color_cast(const RasterImage& img, const ResolvedOp& op) {
  const double g[3] = {op.param("gain_r"), op.param("gain_g"), op.param("gain_b")};
  RasterImage out = img;
  for (size_t i = 0; i < out.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c)
      out.data[i * 3 + c] = static_cast<float>(clamp01(img.data[i * 3 + c] * g[c]));
  return out;
}

inline RasterImage moire(const RasterImage& img, const ResolvedOp& op) {
  const double m = op.param("amplitude");
  const double fx = op.param("freq_x");
  const double fy = op.param("freq_y");
  const double phase = op.param("phase");
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  RasterImage out = img;
  for (uint32_t y = 0; y < img.height; ++y)
    for (uint32_t x = 0; x < img.width; ++x) {
      const double g = 1.0 + m * std::sin(kTwoPi * (fx * x + fy * y) + phase);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = static_cast<float>(clamp01(img.at(x, y, c) * g));
    }
  return out;
}

inline RasterImage text_patch_overlay(const RasterImage& img, const ResolvedOp& op) {
  const long count = static_cast<long>(op.param("count"));
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  RasterImage out = img;
  for (long i = 0; i < count; ++i) {
    const std::string k = "p" + std::to_string(i) + "_";
    const int kind = static_cast<int>(op.param(k + "kind"));
    const float col[3] = {static_cast<float>(op.param(k + "r")),
                          static_cast<float>(op.param(k + "g")),
                          static_cast<float>(op.param(k + "b"))};
    const double x0 = op.param(k + "x0"), y0 = op.param(k + "y0");
    const double x1 = op.param(k + "x1"), y1 = op.param(k + "y1");
    if (kind == 0) {
      const int ax = std::max(0, static_cast<int>(x0)), bx = std::min(w, static_cast<int>(x1));
      const int ay = std::max(0, static_cast<int>(y0)), by = std::min(h, static_cast<int>(y1));
      for (int y = ay; y < by; ++y)
        for (int x = ax; x < bx; ++x)
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = col[c];
    } else {
      const double half = op.param(k + "thick") / 2.0;
      const double vx = x1 - x0, vy = y1 - y0;
      const double len2 = vx * vx + vy * vy;
      const int ax = std::max(0, static_cast<int>(std::floor(std::min(x0, x1) - half)));
      const int bx = std::min(w - 1, static_cast<int>(std::ceil(std::max(x0, x1) + half)));
      const int ay = std::max(0, static_cast<int>(std::floor(std::min(y0, y1) - half)));
      const int by = std::min(h - 1, static_cast<int>(std::ceil(std::max(y0, y1) + half)));
      for (int y = ay; y <= by; ++y)
        for (int x = ax; x <= bx; ++x) {
          double t = len2 > 0.0 ? ((x - x0) * vx + (y - y0) * vy) / len2 : 0.0;
          t = std::min(1.0, std::max(0.0, t));
          const double ddx = x - (x0 + t * vx), ddy = y - (y0 + t * vy);
          if (ddx * ddx + ddy * ddy <= half * half + 0.25)
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = col[c];
        }
    }
  }
  return out;
}

inline RasterImage pixelate(const RasterImage& img, const ResolvedOp& op) {
  const int block = std::max(1, static_cast<int>(op.param("block")));
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  RasterImage out = img;
  for (int by = 0; by < h; by += block)
    for (int bx = 0; bx < w; bx += block) {
      const int y1 = std::min(by + block, h);
      const int x1 = std::min(bx + block, w);
      double acc[3] = {0.0, 0.0, 0.0};
      const double n = static_cast<double>(y1 - by) * (x1 - bx);
      for (int y = by; y < y1; ++y)
        for (int x = bx; x < x1; ++x)
          for (int c = 0; c < 3; ++c) acc[c] += img.at(x, y, c);
      for (int y = by; y < y1; ++y)
        for (int x = bx; x < x1; ++x)
          for (int c = 0; c < 3; ++c)
            out.at(x, y, c) = static_cast<float>(clamp01(acc[c] / n));
    }
  return out;
}

inline RasterImage salt_pepper(const RasterImage& img, const ResolvedOp& op, Rng& rng) {
  const double fraction = op.param("fraction");
  RasterImage out = img;
  for (size_t i = 0; i < out.pixel_count(); ++i) {
    if (rng.uniform01() >= fraction) continue;
    const float v = rng.below(2) == 0 ? 0.0f : 1.0f;
    for (int c = 0; c < 3; ++c) out.data[i * 3 + c] = v;
  }
  return out;
}

inline RasterImage gamma_jitter(const RasterImage& img, const ResolvedOp& op) {
  const double gamma = op.param("gamma");
  RasterImage out = img;
  for (float& v : out.data)
    v = static_cast<float>(clamp01(std::pow(static_cast<double>(v), gamma)));
  return out;
}

}  // namespace ops

/// Apply one resolved op. `substream_seed` feeds the per-sample noise ops;
/// everything else is fully determined by the recorded params.
inline RasterImage apply_resolved_op(const RasterImage& img, const ResolvedOp& op,
                                     uint64_t substream_seed) {
  Rng rng(substream_seed);
  const std::string& id = op.op_id;
  if (id == "jpeg_compress") return ops::jpeg_compress(img, op);
  if (id == "chroma_subsample") return ops::chroma_subsample(img, op);
  if (id == "color_banding") return ops::color_banding(img, op);
  if (id == "random_rescale") return ops::random_rescale(img, op);
  if (id == "gaussian_noise") return ops::gaussian_noise(img, op, rng);
  if (id == "speckle_noise") return ops::speckle_noise(img, op, rng);
  if (id == "poisson_noise") return ops::poisson_noise(img, op, rng);
  if (id == "h264_glitch") return ops::h264_glitch(img, op, rng);
  if (id == "anisotropic_smooth") return ops::anisotropic_smooth(img, op);
  if (id == "motion_blur") return ops::motion_blur(img, op);
  if (id == "chromatic_aberration") return ops::chromatic_aberration(img, op);
  if (id == "vignette") return ops::vignette(img, op);
  if (id == "color_cast") return ops::color_cast(img, op);
  if (id == "moire") return ops::moire(img, op);
  if (id == "text_patch_overlay") return ops::text_patch_overlay(img, op);
  if (id == "pixelate") return ops::pixelate(img, op);
  if (id == "salt_pepper") return ops::salt_pepper(img, op, rng);
  if (id == "gamma_jitter") return ops::gamma_jitter(img, op);
  throw Error(ErrorCode::UnknownOp, "op_id not in catalog: " + id);
}

}  // namespace patina::degrade
