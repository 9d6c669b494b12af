#pragma once

#include <cmath>
#include <vector>

#include "patina/error.hpp"

namespace patina::metrics {

using EmbeddingVector = std::vector<double>;

/// <a,b> / (|a| * |b|). Both vectors must be finite, same-dimension, non-zero.
inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "embedding dims differ or empty");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw Error(ErrorCode::MalformedData, "embedding value not finite");
    }
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine undefined for zero vector");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace patina::metrics
