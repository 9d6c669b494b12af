#pragma once

#include "patina/image.hpp"

namespace patina {

// Full-range BT.601. Channel order of the returned raster is (Y, Cb, Cr),
// all in [0,1]; for RGB inputs in range the conversion stays in range up to
// rounding, so the clamp never moves a sample by more than float epsilon.

inline RasterImage to_ycbcr(const RasterImage& img) {
  require_valid(img, "to_ycbcr");
  RasterImage out(img.width, img.height);
  const size_t n = img.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    const double r = img.data[i * 3 + 0];
    const double g = img.data[i * 3 + 1];
    const double b = img.data[i * 3 + 2];
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    const double cb = (b - y) / 1.772 + 0.5;
    const double cr = (r - y) / 1.402 + 0.5;
    out.data[i * 3 + 0] = static_cast<float>(clamp01(y));
    out.data[i * 3 + 1] = static_cast<float>(clamp01(cb));
    out.data[i * 3 + 2] = static_cast<float>(clamp01(cr));
  }
  return out;
}

inline RasterImage from_ycbcr(const RasterImage& ycc) {
  require_valid(ycc, "from_ycbcr");
  RasterImage out(ycc.width, ycc.height);
  const size_t n = ycc.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    const double y = ycc.data[i * 3 + 0];
    const double cb = ycc.data[i * 3 + 1];
    const double cr = ycc.data[i * 3 + 2];
    const double r = y + 1.402 * (cr - 0.5);
    const double b = y + 1.772 * (cb - 0.5);
    const double g = (y - 0.299 * r - 0.114 * b) / 0.587;
    out.data[i * 3 + 0] = static_cast<float>(clamp01(r));
    out.data[i * 3 + 1] = static_cast<float>(clamp01(g));
    out.data[i * 3 + 2] = static_cast<float>(clamp01(b));
  }
  return out;
}

}  // namespace patina
