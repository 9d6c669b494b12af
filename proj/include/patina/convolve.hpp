#pragma once

#include <cmath>
#include <vector>

#include "patina/image.hpp"

namespace patina {

struct Kernel2D {
  int rows = 0;
  int cols = 0;
  std::vector<double> weights;  // row-major, rows * cols

  Kernel2D() = default;
  Kernel2D(int r, int c, double fill = 0.0)
      : rows(r), cols(c), weights(static_cast<size_t>(r) * c, fill) {
    validate();
  }

  double& at(int r, int c) { return weights[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return weights[static_cast<size_t>(r) * cols + c]; }

  void validate() const {
    if (rows <= 0 || cols <= 0 || rows % 2 == 0 || cols % 2 == 0) {
      throw Error(ErrorCode::DimensionMismatch, "kernel dims must be odd and positive");
    }
    for (double w : weights) {
      if (!std::isfinite(w)) {
        throw Error(ErrorCode::MalformedData, "kernel weight not finite");
      }
    }
  }
};

namespace detail {

// Reflect-101 (edge sample not repeated): ... 2 1 | 0 1 2 ... n-1 | n-2 ...
inline int reflect101(int v, int n) {
  if (n == 1) return 0;
  while (v < 0 || v >= n) {
    if (v < 0) v = -v;
    if (v >= n) v = 2 * n - 2 - v;
  }
  return v;
}

}  // namespace detail

/// Per-channel 2D correlation with reflect-101 borders, clamped to [0,1].
inline RasterImage convolve(const RasterImage& img, const Kernel2D& k) {
  require_valid(img, "convolve");
  k.validate();
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  const int rr = k.rows / 2;
  const int rc = k.cols / 2;
  RasterImage out(img.width, img.height);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int j = -rr; j <= rr; ++j) {
        const int sy = detail::reflect101(y + j, h);
        for (int i = -rc; i <= rc; ++i) {
          const int sx = detail::reflect101(x + i, w);
          const double wgt = k.at(j + rr, i + rc);
          if (wgt == 0.0) continue;
          for (int c = 0; c < 3; ++c) acc[c] += wgt * img.at(sx, sy, c);
        }
      }
      for (int c = 0; c < 3; ++c)
        out.at(static_cast<uint32_t>(x), static_cast<uint32_t>(y), c) =
            static_cast<float>(clamp01(acc[c]));
    }
  }
  return out;
}

inline std::vector<double> gaussian_kernel_1d(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    k[static_cast<size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

/// Separable Gaussian blur; sigma_x along columns, sigma_y along rows.
inline RasterImage gaussian_blur(const RasterImage& img, double sigma_x, double sigma_y) {
  require_valid(img, "gaussian_blur");
  const auto kx = gaussian_kernel_1d(sigma_x);
  const auto ky = gaussian_kernel_1d(sigma_y);
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  const int rx = static_cast<int>(kx.size()) / 2;
  const int ry = static_cast<int>(ky.size()) / 2;

  RasterImage tmp(img.width, img.height);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int i = -rx; i <= rx; ++i) {
        const int sx = detail::reflect101(x + i, w);
        const double wgt = kx[static_cast<size_t>(i + rx)];
        for (int c = 0; c < 3; ++c) acc[c] += wgt * img.at(sx, y, c);
      }
      for (int c = 0; c < 3; ++c) tmp.at(x, y, c) = static_cast<float>(acc[c]);
    }
  RasterImage out(img.width, img.height);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int j = -ry; j <= ry; ++j) {
        const int sy = detail::reflect101(y + j, h);
        const double wgt = ky[static_cast<size_t>(j + ry)];
        for (int c = 0; c < 3; ++c) acc[c] += wgt * tmp.at(x, sy, c);
      }
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(clamp01(acc[c]));
    }
  return out;
}

}  // namespace patina
