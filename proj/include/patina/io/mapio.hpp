#pragma once

#include <cstring>
#include <string>
#include <vector>

#include "patina/error.hpp"
#include "patina/io/csv.hpp"
#include "patina/io/file.hpp"
#include "patina/metrics/cosine.hpp"
#include "patina/metrics/entropy.hpp"

namespace patina::io {

namespace detail {

inline uint32_t read_u32le(const std::string& buf, size_t off) {
  return static_cast<uint32_t>(static_cast<uint8_t>(buf[off])) |
         static_cast<uint32_t>(static_cast<uint8_t>(buf[off + 1])) << 8 |
         static_cast<uint32_t>(static_cast<uint8_t>(buf[off + 2])) << 16 |
         static_cast<uint32_t>(static_cast<uint8_t>(buf[off + 3])) << 24;
}

inline void append_u32le(std::string& buf, uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
  buf.push_back(static_cast<char>((v >> 16) & 0xff));
  buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline float read_f32le(const std::string& buf, size_t off) {
  const uint32_t bits = read_u32le(buf, off);
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

inline void append_f32le(std::string& buf, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  append_u32le(buf, bits);
}

}  // namespace detail

// Activation map container: magic AMAP, u32le rows, u32le cols, then
// rows*cols f32le row-major. A plain CSV grid (rows of comma-separated
// decimals) is accepted as an alternative, sniffed by the magic.

inline metrics::ActivationMap parse_activation_map(const std::string& buf) {
  if (buf.size() >= 4 && buf.compare(0, 4, "AMAP") == 0) {
    if (buf.size() < 12) {
      throw Error(ErrorCode::MalformedData, "activation map truncated header");
    }
    metrics::ActivationMap map;
    map.rows = detail::read_u32le(buf, 4);
    map.cols = detail::read_u32le(buf, 8);
    if (map.rows == 0 || map.cols == 0) {
      throw Error(ErrorCode::MalformedData, "activation map has zero dimension");
    }
    const size_t need = 12 + map.size() * 4;
    if (buf.size() != need) {
      throw Error(ErrorCode::MalformedData,
                  "activation map payload size mismatch (expected " + std::to_string(need) +
                      " bytes, got " + std::to_string(buf.size()) + ")");
    }
    map.values.resize(map.size());
    for (size_t i = 0; i < map.values.size(); ++i) {
      map.values[i] = detail::read_f32le(buf, 12 + i * 4);
    }
    return map;
  }
  // CSV grid fallback.
  const auto lines = detail::split_lines(buf);
  metrics::ActivationMap map;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (map.cols == 0) {
      map.cols = static_cast<uint32_t>(fields.size());
    } else if (fields.size() != map.cols) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": ragged activation grid");
    }
    for (const auto& f : fields) {
      map.values.push_back(detail::parse_double(f, i + 1, "activation value"));
    }
    ++map.rows;
  }
  if (map.rows == 0) {
    throw Error(ErrorCode::MalformedData, "activation map file is empty");
  }
  return map;
}

inline metrics::ActivationMap load_activation_map(const std::string& path) {
  return parse_activation_map(read_text_file(path));
}

inline std::string format_activation_map(const metrics::ActivationMap& map) {
  map.validate();
  std::string buf = "AMAP";
  detail::append_u32le(buf, map.rows);
  detail::append_u32le(buf, map.cols);
  for (double v : map.values) detail::append_f32le(buf, static_cast<float>(v));
  return buf;
}

inline void save_activation_map(const std::string& path, const metrics::ActivationMap& map) {
  write_text_file(path, format_activation_map(map));
}

// Embedding container: magic EVEC, u32le dim, then dim f32le values.

inline metrics::EmbeddingVector parse_embedding(const std::string& buf) {
  if (buf.size() < 8 || buf.compare(0, 4, "EVEC") != 0) {
    throw Error(ErrorCode::MalformedData, "embedding file missing EVEC magic");
  }
  const uint32_t dim = detail::read_u32le(buf, 4);
  if (dim == 0) {
    throw Error(ErrorCode::MalformedData, "embedding has zero dimension");
  }
  const size_t need = 8 + static_cast<size_t>(dim) * 4;
  if (buf.size() != need) {
    throw Error(ErrorCode::MalformedData,
                "embedding payload size mismatch (expected " + std::to_string(need) +
                    " bytes, got " + std::to_string(buf.size()) + ")");
  }
  metrics::EmbeddingVector vec(dim);
  for (uint32_t i = 0; i < dim; ++i) {
    vec[i] = detail::read_f32le(buf, 8 + static_cast<size_t>(i) * 4);
  }
  return vec;
}

inline metrics::EmbeddingVector load_embedding(const std::string& path) {
  return parse_embedding(read_text_file(path));
}

inline std::string format_embedding(const metrics::EmbeddingVector& vec) {
  if (vec.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "embedding must be non-empty");
  }
  std::string buf = "EVEC";
  detail::append_u32le(buf, static_cast<uint32_t>(vec.size()));
  for (double v : vec) detail::append_f32le(buf, static_cast<float>(v));
  return buf;
}

inline void save_embedding(const std::string& path, const metrics::EmbeddingVector& vec) {
  write_text_file(path, format_embedding(vec));
}

}  // namespace patina::io
