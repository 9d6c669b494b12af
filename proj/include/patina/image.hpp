#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "patina/error.hpp"

namespace patina {

/// 3-channel sRGB raster. Samples are row-major interleaved RGB floats,
/// normalized to [0,1]. 8-bit values exist only at the codec boundary.
struct RasterImage {
  uint32_t width = 0;
  uint32_t height = 0;
  static constexpr uint32_t kChannels = 3;
  std::vector<float> data;  // size = width * height * 3, row-major RGB

  RasterImage() = default;
  RasterImage(uint32_t w, uint32_t h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<size_t>(w) * h * kChannels, fill) {}

  size_t sample_count() const { return data.size(); }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }

  float& at(uint32_t x, uint32_t y, uint32_t c) {
    return data[(static_cast<size_t>(y) * width + x) * kChannels + c];
  }
  float at(uint32_t x, uint32_t y, uint32_t c) const {
    return data[(static_cast<size_t>(y) * width + x) * kChannels + c];
  }

  bool same_dims(const RasterImage& other) const {
    return width == other.width && height == other.height;
  }

  bool operator==(const RasterImage& other) const {
    return width == other.width && height == other.height && data == other.data;
  }
};

inline float clamp01(float v) { return std::min(1.0f, std::max(0.0f, v)); }
inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

inline void clamp_image(RasterImage& img) {
  for (float& v : img.data) v = clamp01(v);
}

/// 8-bit quantization used at every I/O boundary: round(v * 255).
inline uint8_t to_u8(float v) {
  return static_cast<uint8_t>(std::lround(clamp01(v) * 255.0f));
}
inline float from_u8(uint8_t v) { return static_cast<float>(v) / 255.0f; }

/// Quantized RGB bytes of the image, row-major. This is the buffer PNG
/// emission and manifest output hashes are defined over.
inline std::vector<uint8_t> quantize_rgb8(const RasterImage& img) {
  std::vector<uint8_t> out(img.sample_count());
  for (size_t i = 0; i < out.size(); ++i) out[i] = to_u8(img.data[i]);
  return out;
}

inline void require_valid(const RasterImage& img, const char* where) {
  if (img.width == 0 || img.height == 0 ||
      img.data.size() != static_cast<size_t>(img.width) * img.height * RasterImage::kChannels) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": image dimensions/data size inconsistent");
  }
}

}  // namespace patina
