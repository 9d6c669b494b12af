#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "patina/color.hpp"
#include "patina/convolve.hpp"
#include "patina/image.hpp"

namespace patina::face {

/// Per-channel k x k median, reflect-101 borders. k odd.
inline RasterImage median_filter(const RasterImage& img, int k) {
  require_valid(img, "median_filter");
  if (k <= 0 || k % 2 == 0) {
    throw Error(ErrorCode::DimensionMismatch, "median window must be odd and positive");
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  const int r = k / 2;
  RasterImage out(img.width, img.height);
  std::vector<float> window(static_cast<size_t>(k) * k);
  const size_t mid = window.size() / 2;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        size_t n = 0;
        for (int j = -r; j <= r; ++j) {
          const int sy = detail::reflect101(y + j, h);
          for (int i = -r; i <= r; ++i) {
            window[n++] = img.at(detail::reflect101(x + i, w), sy, c);
          }
        }
        std::nth_element(window.begin(), window.begin() + mid, window.end());
        out.at(x, y, c) = window[mid];
      }
  return out;
}

/// Per-channel bilateral filter: Gaussian spatial weight times Gaussian
/// range weight on the channel difference.
inline RasterImage bilateral_filter(const RasterImage& img, double sigma_spatial = 5.0,
                                    double sigma_range = 0.1, int window = 11) {
  require_valid(img, "bilateral_filter");
  if (window <= 0 || window % 2 == 0) {
    throw Error(ErrorCode::DimensionMismatch, "bilateral window must be odd and positive");
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  const int r = window / 2;
  std::vector<double> spatial(static_cast<size_t>(window) * window);
  for (int j = -r; j <= r; ++j)
    for (int i = -r; i <= r; ++i)
      spatial[static_cast<size_t>(j + r) * window + (i + r)] =
          std::exp(-(static_cast<double>(i) * i + static_cast<double>(j) * j) /
                   (2.0 * sigma_spatial * sigma_spatial));
  const double inv_range = 1.0 / (2.0 * sigma_range * sigma_range);
  RasterImage out(img.width, img.height);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        const double v0 = img.at(x, y, c);
        double num = 0.0, den = 0.0;
        for (int j = -r; j <= r; ++j) {
          const int sy = detail::reflect101(y + j, h);
          for (int i = -r; i <= r; ++i) {
            const int sx = detail::reflect101(x + i, w);
            const double v = img.at(sx, sy, c);
            const double wt = spatial[static_cast<size_t>(j + r) * window + (i + r)] *
                              std::exp(-(v - v0) * (v - v0) * inv_range);
            num += wt * v;
            den += wt;
          }
        }
        out.at(x, y, c) = static_cast<float>(clamp01(num / den));
      }
  return out;
}

/// Unsharp mask: v + amount * (v - gaussian_blur(v)).
inline RasterImage unsharp_mask(const RasterImage& img, double amount = 1.0,
                                double sigma = 1.5) {
  require_valid(img, "unsharp_mask");
  const RasterImage blurred = gaussian_blur(img, sigma, sigma);
  RasterImage out(img.width, img.height);
  for (size_t i = 0; i < img.sample_count(); ++i) {
    out.data[i] = static_cast<float>(
        clamp01(img.data[i] + amount * (static_cast<double>(img.data[i]) - blurred.data[i])));
  }
  return out;
}

/// Contrast-limited adaptive histogram equalization on the Y channel.
/// Tile grid tiles x tiles; 256-bin histograms clipped at
/// clip_limit * tile_area / 256 with uniform excess redistribution; per-pixel
/// bilinear blend of the four surrounding tile mappings.
inline RasterImage clahe_y(const RasterImage& img, int tiles = 8, double clip_limit = 2.0) {
  require_valid(img, "clahe_y");
  if (tiles <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "clahe tile count must be positive");
  }
  constexpr int kBins = 256;
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  RasterImage ycc = to_ycbcr(img);

  const double tile_w = static_cast<double>(w) / tiles;
  const double tile_h = static_cast<double>(h) / tiles;
  auto tile_of = [&](int v, double tsize) {
    return std::min(tiles - 1, static_cast<int>(v / tsize));
  };

  // Per-tile clipped CDF lookup tables mapping bin -> equalized Y in [0,1].
  std::vector<int> bin_idx(static_cast<size_t>(w) * h);
  std::vector<uint32_t> hists(static_cast<size_t>(tiles) * tiles * kBins, 0u);
  std::vector<uint32_t> tile_count(static_cast<size_t>(tiles) * tiles, 0u);
  for (int y = 0; y < h; ++y) {
    const int ty = tile_of(y, tile_h);
    for (int x = 0; x < w; ++x) {
      const double yy = ycc.at(x, y, 0);
      const int b =
          std::min(kBins - 1, std::max(0, static_cast<int>(std::lround(yy * (kBins - 1)))));
      bin_idx[static_cast<size_t>(y) * w + x] = b;
      const size_t tile = static_cast<size_t>(ty) * tiles + tile_of(x, tile_w);
      ++hists[tile * kBins + b];
      ++tile_count[tile];
    }
  }
  std::vector<double> lut(static_cast<size_t>(tiles) * tiles * kBins);
  for (size_t tile = 0; tile < tile_count.size(); ++tile) {
    uint32_t* hist = &hists[tile * kBins];
    const uint32_t count = tile_count[tile];
    const uint32_t clip =
        std::max<uint32_t>(1, static_cast<uint32_t>(clip_limit * count / kBins));
    uint64_t excess = 0;
    for (int b = 0; b < kBins; ++b) {
      if (hist[b] > clip) {
        excess += hist[b] - clip;
        hist[b] = clip;
      }
    }
    const uint32_t add = static_cast<uint32_t>(excess / kBins);
    const uint32_t rem = static_cast<uint32_t>(excess % kBins);
    for (int b = 0; b < kBins; ++b) {
      hist[b] += add + (static_cast<uint32_t>(b) < rem ? 1u : 0u);
    }
    uint64_t cdf = 0;
    double* tl = &lut[tile * kBins];
    for (int b = 0; b < kBins; ++b) {
      cdf += hist[b];
      tl[b] = count > 0 ? static_cast<double>(cdf) / count
                        : static_cast<double>(b) / (kBins - 1);
    }
  }

  // Blend the four nearest tile LUTs around each pixel (clamped at borders).
  for (int y = 0; y < h; ++y) {
    const double gy = y / tile_h - 0.5;
    int ty0 = static_cast<int>(std::floor(gy));
    const double fy = gy - ty0;
    const int ty1 = std::min(tiles - 1, std::max(0, ty0 + 1));
    ty0 = std::min(tiles - 1, std::max(0, ty0));
    for (int x = 0; x < w; ++x) {
      const double gx = x / tile_w - 0.5;
      int tx0 = static_cast<int>(std::floor(gx));
      const double fx = gx - tx0;
      const int tx1 = std::min(tiles - 1, std::max(0, tx0 + 1));
      tx0 = std::min(tiles - 1, std::max(0, tx0));
      const int b = bin_idx[static_cast<size_t>(y) * w + x];
      auto at_tile = [&](int ty, int tx) {
        return lut[(static_cast<size_t>(ty) * tiles + tx) * kBins + b];
      };
      const double top = (1.0 - fx) * at_tile(ty0, tx0) + fx * at_tile(ty0, tx1);
      const double bot = (1.0 - fx) * at_tile(ty1, tx0) + fx * at_tile(ty1, tx1);
      ycc.at(x, y, 0) = static_cast<float>(clamp01((1.0 - fy) * top + fy * bot));
    }
  }
  return from_ycbcr(ycc);
}

/// Non-local means via one integral image per search offset. Patch distance
/// is the mean squared sample difference over the (border-clamped) patch
/// window; weight = exp(-d / h^2). The identity offset gets weight 1.
inline RasterImage nlmeans(const RasterImage& img, double h_param = 0.1, int patch = 7,
                           int search = 21) {
  require_valid(img, "nlmeans");
  if (patch <= 0 || patch % 2 == 0 || search <= 0 || search % 2 == 0) {
    throw Error(ErrorCode::DimensionMismatch, "nlmeans windows must be odd and positive");
  }
  const int w = static_cast<int>(img.width);
  const int h = static_cast<int>(img.height);
  const int pr = patch / 2;
  const int sr = search / 2;
  const double inv_h2 = 1.0 / (h_param * h_param);
  const size_t npx = static_cast<size_t>(w) * h;

  std::vector<double> num(npx * 3, 0.0), den(npx, 0.0);
  std::vector<double> diff(npx), integral((static_cast<size_t>(w) + 1) * (h + 1));

  for (int dy = -sr; dy <= sr; ++dy) {
    for (int dx = -sr; dx <= sr; ++dx) {
      if (dx == 0 && dy == 0) continue;
      // Squared sample difference against the reflect-101 shifted image.
      for (int y = 0; y < h; ++y) {
        const int sy = detail::reflect101(y + dy, h);
        for (int x = 0; x < w; ++x) {
          const int sx = detail::reflect101(x + dx, w);
          double d2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double d = static_cast<double>(img.at(x, y, c)) - img.at(sx, sy, c);
            d2 += d * d;
          }
          diff[static_cast<size_t>(y) * w + x] = d2;
        }
      }
      // Summed-area table of the diff map.
      for (int x = 0; x <= w; ++x) integral[static_cast<size_t>(x)] = 0.0;
      for (int y = 1; y <= h; ++y) {
        double row = 0.0;
        integral[static_cast<size_t>(y) * (w + 1)] = 0.0;
        for (int x = 1; x <= w; ++x) {
          row += diff[static_cast<size_t>(y - 1) * w + (x - 1)];
          integral[static_cast<size_t>(y) * (w + 1) + x] =
              integral[static_cast<size_t>(y - 1) * (w + 1) + x] + row;
        }
      }
      for (int y = 0; y < h; ++y) {
        const int ya = std::max(0, y - pr), yb = std::min(h - 1, y + pr);
        const int sy = detail::reflect101(y + dy, h);
        for (int x = 0; x < w; ++x) {
          const int xa = std::max(0, x - pr), xb = std::min(w - 1, x + pr);
          const double sum =
              integral[static_cast<size_t>(yb + 1) * (w + 1) + (xb + 1)] -
              integral[static_cast<size_t>(ya) * (w + 1) + (xb + 1)] -
              integral[static_cast<size_t>(yb + 1) * (w + 1) + xa] +
              integral[static_cast<size_t>(ya) * (w + 1) + xa];
          const double count = static_cast<double>(yb - ya + 1) * (xb - xa + 1) * 3.0;
          const double wt = std::exp(-(sum / count) * inv_h2);
          const size_t pi = static_cast<size_t>(y) * w + x;
          const int sx = detail::reflect101(x + dx, w);
          for (int c = 0; c < 3; ++c) num[pi * 3 + c] += wt * img.at(sx, sy, c);
          den[pi] += wt;
        }
      }
    }
  }
  RasterImage out(img.width, img.height);
  for (size_t pi = 0; pi < npx; ++pi) {
    const double d = den[pi] + 1.0;  // + identity offset at weight 1
    for (int c = 0; c < 3; ++c) {
      out.data[pi * 3 + c] =
          static_cast<float>(clamp01((num[pi * 3 + c] + img.data[pi * 3 + c]) / d));
    }
  }
  return out;
}

}  // namespace patina::face
