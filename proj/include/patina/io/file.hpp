#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "patina/error.hpp"

namespace patina::io {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open for reading: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::Io, "read failed: " + path);
  }
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot open for writing: " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "write failed: " + path);
  }
}

}  // namespace patina::io
