#pragma once

#include <cmath>

#include "patina/image.hpp"

namespace patina {

inline double mse(const RasterImage& a, const RasterImage& b) {
  require_valid(a, "mse");
  require_valid(b, "mse");
  if (!a.same_dims(b)) {
    throw Error(ErrorCode::DimensionMismatch, "mse: images differ in size");
  }
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.data.size());
}

/// PSNR in dB over all samples; capped at 99.0 when MSE < 1e-10.
inline double psnr(const RasterImage& a, const RasterImage& b) {
  const double m = mse(a, b);
  if (m < 1e-10) return 99.0;
  return 10.0 * std::log10(1.0 / m);
}

}  // namespace patina
