#pragma once

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "patina/image.hpp"

namespace patina {

enum class ImageFormat { PNG, JPEG };
enum class ChromaSubsampling { S444, S422, S420 };

namespace detail {

inline bool looks_png(const std::vector<uint8_t>& b) {
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

inline bool looks_jpeg(const std::vector<uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  jmp_buf jump;
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  longjmp(mgr->jump, 1);
}

inline RasterImage decode_png(const std::vector<uint8_t>& bytes) {
  png_image im;
  std::memset(&im, 0, sizeof(im));
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&im, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::MalformedFile, std::string("PNG: ") + im.message);
  }
  // Read as RGBA so palette/gray/16-bit inputs normalize; alpha is dropped.
  im.format = PNG_FORMAT_RGBA;
  std::vector<uint8_t> buf(PNG_IMAGE_SIZE(im));
  if (!png_image_finish_read(&im, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = im.message;
    png_image_free(&im);
    throw Error(ErrorCode::MalformedFile, "PNG: " + msg);
  }
  RasterImage out(im.width, im.height);
  const size_t n = out.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    out.data[i * 3 + 0] = from_u8(buf[i * 4 + 0]);
    out.data[i * 3 + 1] = from_u8(buf[i * 4 + 1]);
    out.data[i * 3 + 2] = from_u8(buf[i * 4 + 2]);
  }
  return out;
}

inline RasterImage decode_jpeg(const std::vector<uint8_t>& bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;

  std::vector<uint8_t> rgb;
  uint32_t width = 0, height = 0;
  jpeg_create_decompress(&cinfo);
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::MalformedFile, "JPEG: decode failed");
  }
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  rgb.resize(static_cast<size_t>(width) * height * 3);
  const size_t stride = static_cast<size_t>(width) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    uint8_t* row = rgb.data() + static_cast<size_t>(cinfo.output_scanline) * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  RasterImage out(width, height);
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = from_u8(rgb[i]);
  return out;
}

}  // namespace detail

/// Decode a PNG or baseline JPEG byte buffer into a [0,1] raster.
/// Grayscale inputs replicate across the three channels; alpha is dropped.
inline RasterImage decode_image(const std::vector<uint8_t>& bytes) {
  if (detail::looks_png(bytes)) return detail::decode_png(bytes);
  if (detail::looks_jpeg(bytes)) return detail::decode_jpeg(bytes);
  throw Error(ErrorCode::UnsupportedFormat, "not a PNG or JPEG byte stream");
}

/// Encode to PNG (lossless over round(v*255)) or baseline JPEG with the
/// requested quality scaling and chroma subsampling. Quality/subsampling are
/// ignored for PNG.
inline std::vector<uint8_t> encode_image(const RasterImage& img, ImageFormat format,
                                         int jpeg_quality = 90,
                                         ChromaSubsampling subsampling = ChromaSubsampling::S420) {
  require_valid(img, "encode_image");
  const std::vector<uint8_t> rgb = quantize_rgb8(img);

  if (format == ImageFormat::PNG) {
    png_image im;
    std::memset(&im, 0, sizeof(im));
    im.version = PNG_IMAGE_VERSION;
    im.width = img.width;
    im.height = img.height;
    im.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&im, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
      throw Error(ErrorCode::Io, std::string("PNG: ") + im.message);
    }
    std::vector<uint8_t> out(size);
    if (!png_image_write_to_memory(&im, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
      throw Error(ErrorCode::Io, std::string("PNG: ") + im.message);
    }
    out.resize(size);
    return out;
  }

  if (jpeg_quality < 1 || jpeg_quality > 100) {
    throw Error(ErrorCode::InvalidQuality,
                "jpeg quality must be in 1..100, got " + std::to_string(jpeg_quality));
  }

  jpeg_compress_struct cinfo;
  detail::JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = detail::jpeg_error_exit;

  unsigned char* mem = nullptr;
  unsigned long mem_size = 0;
  jpeg_create_compress(&cinfo);
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (mem) free(mem);
    throw Error(ErrorCode::Io, "JPEG: encode failed");
  }
  jpeg_mem_dest(&cinfo, &mem, &mem_size);
  cinfo.image_width = img.width;
  cinfo.image_height = img.height;
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, jpeg_quality, TRUE);  // TRUE: force baseline tables
  switch (subsampling) {
    case ChromaSubsampling::S444:
      cinfo.comp_info[0].h_samp_factor = 1;
      cinfo.comp_info[0].v_samp_factor = 1;
      break;
    case ChromaSubsampling::S422:
      cinfo.comp_info[0].h_samp_factor = 2;
      cinfo.comp_info[0].v_samp_factor = 1;
      break;
    case ChromaSubsampling::S420:
      cinfo.comp_info[0].h_samp_factor = 2;
      cinfo.comp_info[0].v_samp_factor = 2;
      break;
  }
  cinfo.comp_info[1].h_samp_factor = 1;
  cinfo.comp_info[1].v_samp_factor = 1;
  cinfo.comp_info[2].h_samp_factor = 1;
  cinfo.comp_info[2].v_samp_factor = 1;
  jpeg_start_compress(&cinfo, TRUE);
  const size_t stride = static_cast<size_t>(img.width) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    const uint8_t* row = rgb.data() + static_cast<size_t>(cinfo.next_scanline) * stride;
    JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<uint8_t> out(mem, mem + mem_size);
  free(mem);
  return out;
}

// ---------------------------------------------------------------------------
// File helpers

inline std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_file(const std::filesystem::path& path, const void* data, size_t len) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!f) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

inline void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
  write_file(path, bytes.data(), bytes.size());
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, text.data(), text.size());
}

inline RasterImage load_image(const std::filesystem::path& path) {
  return decode_image(read_file(path));
}

inline void save_png(const std::filesystem::path& path, const RasterImage& img) {
  write_file(path, encode_image(img, ImageFormat::PNG));
}

}  // namespace patina
