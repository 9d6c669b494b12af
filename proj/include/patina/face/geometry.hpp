#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "patina/error.hpp"
#include "patina/image.hpp"
#include "patina/resample.hpp"

namespace patina::face {

/// Axis-aligned box in pixel coordinates; x/y may be fractional.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

inline constexpr int kPatchSize = 14;
inline constexpr int kCropSize = 252;

/// Squarify-then-scale: side = factor * max(w, h) centered on the box
/// center, translated minimally into the image, clipped square if the
/// image is smaller than the side.
inline BBox expand_bbox(const BBox& b, double factor, uint32_t img_w, uint32_t img_h) {
  if (!(b.w > 0.0) || !(b.h > 0.0)) {
    throw Error(ErrorCode::DegenerateBox, "bbox sides must be positive");
  }
  if (factor < 1.0) {
    throw Error(ErrorCode::DegenerateBox, "expansion factor must be >= 1");
  }
  const double cx = b.x + b.w / 2.0;
  const double cy = b.y + b.h / 2.0;
  double side = factor * std::max(b.w, b.h);
  side = std::min({side, static_cast<double>(img_w), static_cast<double>(img_h)});
  double nx = cx - side / 2.0;
  double ny = cy - side / 2.0;
  nx = std::min(std::max(nx, 0.0), static_cast<double>(img_w) - side);
  ny = std::min(std::max(ny, 0.0), static_cast<double>(img_h) - side);
  return BBox{nx, ny, side, side};
}

inline void require_patch_aligned(uint32_t out, const char* where) {
  if (out == 0 || out % kPatchSize != 0) {
    throw Error(ErrorCode::NotPatchAligned,
                std::string(where) + ": output side " + std::to_string(out) +
                    " not divisible by " + std::to_string(kPatchSize) +
                    " (remainder " + std::to_string(out % kPatchSize) + ")");
  }
}

/// Bilinear resample of the box region to out x out. A 1:1 box at integer
/// offsets is an exact copy (the half-pixel terms cancel).
inline RasterImage crop_resize(const RasterImage& img, const BBox& b, uint32_t out = kCropSize) {
  require_valid(img, "crop_resize");
  require_patch_aligned(out, "crop_resize");
  if (!(b.w > 0.0) || !(b.h > 0.0)) {
    throw Error(ErrorCode::DegenerateBox, "crop box sides must be positive");
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  const double sx_scale = b.w / out;
  const double sy_scale = b.h / out;
  RasterImage dst(out, out);
  for (uint32_t j = 0; j < out; ++j) {
    const double sy = b.y + (j + 0.5) * sy_scale - 0.5;
    const int y0 = static_cast<int>(std::floor(sy));
    const double fy = sy - y0;
    const int ya = std::min(h - 1, std::max(0, y0));
    const int yb = std::min(h - 1, std::max(0, y0 + 1));
    for (uint32_t i = 0; i < out; ++i) {
      const double sx = b.x + (i + 0.5) * sx_scale - 0.5;
      const int x0 = static_cast<int>(std::floor(sx));
      const double fx = sx - x0;
      const int xa = std::min(w - 1, std::max(0, x0));
      const int xb = std::min(w - 1, std::max(0, x0 + 1));
      for (uint32_t c = 0; c < 3; ++c) {
        const double top = (1.0 - fx) * img.at(xa, ya, c) + fx * img.at(xb, ya, c);
        const double bot = (1.0 - fx) * img.at(xa, yb, c) + fx * img.at(xb, yb, c);
        dst.at(i, j, c) = static_cast<float>(clamp01((1.0 - fy) * top + fy * bot));
      }
    }
  }
  return dst;
}

/// Center crop to out x out. Large-enough inputs are copied bit-exactly at
/// floor((dim-out)/2) offsets; smaller inputs are bilinear-upscaled so the
/// shorter side equals out, then cropped.
inline RasterImage center_crop(const RasterImage& img, uint32_t out = kCropSize) {
  require_valid(img, "center_crop");
  require_patch_aligned(out, "center_crop");
  RasterImage src = img;
  if (std::min(img.width, img.height) < out) {
    const double scale = static_cast<double>(out) / std::min(img.width, img.height);
    uint32_t nw = static_cast<uint32_t>(std::lround(img.width * scale));
    uint32_t nh = static_cast<uint32_t>(std::lround(img.height * scale));
    if (img.width <= img.height) nw = out; else nh = out;
    src = resize(img, std::max(out, nw), std::max(out, nh), ResampleMode::Bilinear);
  }
  const uint32_t ox = (src.width - out) / 2;
  const uint32_t oy = (src.height - out) / 2;
  RasterImage dst(out, out);
  for (uint32_t y = 0; y < out; ++y)
    for (uint32_t x = 0; x < out; ++x)
      for (uint32_t c = 0; c < 3; ++c) dst.at(x, y, c) = src.at(ox + x, oy + y, c);
  return dst;
}

/// Patch tiling of a square input: 252 with 14-pixel patches -> 18x18.
inline std::pair<uint32_t, uint32_t> patch_grid(uint32_t dim, uint32_t patch = kPatchSize) {
  if (patch == 0) {
    throw Error(ErrorCode::NotPatchAligned, "patch size must be positive");
  }
  if (dim % patch != 0) {
    throw Error(ErrorCode::NotPatchAligned,
                "dim " + std::to_string(dim) + " not divisible by patch " +
                    std::to_string(patch) + " (remainder " + std::to_string(dim % patch) + ")");
  }
  return {dim / patch, dim / patch};
}

}  // namespace patina::face
