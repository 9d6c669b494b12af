#pragma once

#include <openssl/evp.h>

#include <cstdint>
#include <string>
#include <vector>

#include "patina/error.hpp"

namespace patina {

inline std::string sha256_hex(const void* data, size_t len) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(data, len, md, &md_len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(md_len * 2);
  for (unsigned int i = 0; i < md_len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

inline std::string sha256_hex(const std::vector<uint8_t>& bytes) {
  return sha256_hex(bytes.data(), bytes.size());
}

inline std::string sha256_hex(const std::string& s) {
  return sha256_hex(s.data(), s.size());
}

}  // namespace patina
