#pragma once

#include <cmath>
#include <string>

#include "patina/image.hpp"

namespace patina {

enum class ResampleMode { Nearest, Bilinear, Bicubic };

inline const char* resample_mode_name(ResampleMode m) {
  switch (m) {
    case ResampleMode::Nearest: return "nearest";
    case ResampleMode::Bilinear: return "bilinear";
    case ResampleMode::Bicubic: return "bicubic";
  }
  return "?";
}

namespace detail {

inline int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

// Catmull-Rom kernel (a = -0.5).
inline double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

}  // namespace detail

/// Resample to (out_w, out_h) with the half-pixel-center convention
/// src = (dst + 0.5) * scale - 0.5. Out-of-range taps clamp to the edge;
/// output samples clamp to [0,1]. Identity dimensions reproduce the input
/// bit-exactly in every mode.
inline RasterImage resize(const RasterImage& img, uint32_t out_w, uint32_t out_h,
                          ResampleMode mode) {
  require_valid(img, "resize");
  if (out_w == 0 || out_h == 0) {
    throw Error(ErrorCode::DimensionMismatch, "resize: output dims must be >= 1");
  }
  const int in_w = static_cast<int>(img.width);
  const int in_h = static_cast<int>(img.height);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  RasterImage out(out_w, out_h);

  for (uint32_t oy = 0; oy < out_h; ++oy) {
    const double fy = (oy + 0.5) * sy - 0.5;
    for (uint32_t ox = 0; ox < out_w; ++ox) {
      const double fx = (ox + 0.5) * sx - 0.5;
      double acc[3] = {0.0, 0.0, 0.0};
      switch (mode) {
        case ResampleMode::Nearest: {
          const int ix = detail::clamp_index(static_cast<int>(std::floor(fx + 0.5)), in_w);
          const int iy = detail::clamp_index(static_cast<int>(std::floor(fy + 0.5)), in_h);
          for (int c = 0; c < 3; ++c) acc[c] = img.at(ix, iy, c);
          break;
        }
        case ResampleMode::Bilinear: {
          const int x0 = static_cast<int>(std::floor(fx));
          const int y0 = static_cast<int>(std::floor(fy));
          const double tx = fx - x0;
          const double ty = fy - y0;
          const int xs[2] = {detail::clamp_index(x0, in_w), detail::clamp_index(x0 + 1, in_w)};
          const int ys[2] = {detail::clamp_index(y0, in_h), detail::clamp_index(y0 + 1, in_h)};
          const double wx[2] = {1.0 - tx, tx};
          const double wy[2] = {1.0 - ty, ty};
          for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
              const double w = wx[i] * wy[j];
              if (w == 0.0) continue;
              for (int c = 0; c < 3; ++c) acc[c] += w * img.at(xs[i], ys[j], c);
            }
          break;
        }
        case ResampleMode::Bicubic: {
          const int x0 = static_cast<int>(std::floor(fx));
          const int y0 = static_cast<int>(std::floor(fy));
          double wx[4], wy[4];
          int xs[4], ys[4];
          for (int k = 0; k < 4; ++k) {
            wx[k] = detail::cubic_weight(fx - (x0 - 1 + k));
            wy[k] = detail::cubic_weight(fy - (y0 - 1 + k));
            xs[k] = detail::clamp_index(x0 - 1 + k, in_w);
            ys[k] = detail::clamp_index(y0 - 1 + k, in_h);
          }
          for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) {
              const double w = wx[i] * wy[j];
              if (w == 0.0) continue;
              for (int c = 0; c < 3; ++c) acc[c] += w * img.at(xs[i], ys[j], c);
            }
          break;
        }
      }
      for (int c = 0; c < 3; ++c)
        out.at(ox, oy, c) = static_cast<float>(clamp01(acc[c]));
    }
  }
  return out;
}

}  // namespace patina
