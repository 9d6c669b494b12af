#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "patina/error.hpp"

namespace patina::metrics {

/// Non-negative 2D grid treated as an unnormalized probability mass.
struct ActivationMap {
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<double> values;  // row-major, rows * cols

  size_t size() const { return static_cast<size_t>(rows) * cols; }

  void validate() const {
    if (rows == 0 || cols == 0 || values.size() != size()) {
      throw Error(ErrorCode::DimensionMismatch, "activation map dims/values inconsistent");
    }
  }
};

/// Min-max normalize in place for tools that emit signed maps. A constant
/// map becomes all ones (uniform attention; entropy then hits its maximum).
inline void normalize_minmax(ActivationMap& map) {
  map.validate();
  double lo = map.values[0], hi = map.values[0];
  for (double v : map.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::MalformedData, "activation map value not finite");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) {
    for (double& v : map.values) v = 1.0;
    return;
  }
  for (double& v : map.values) v = (v - lo) / (hi - lo);
}

/// Shannon entropy in nats of the normalized map: P = map / sum,
/// H = -sum P ln P with 0 ln 0 := 0. Uniform R x C maps hit ln(R*C).
inline double attribution_entropy(const ActivationMap& map) {
  map.validate();
  double total = 0.0;
  for (double v : map.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::MalformedData, "activation map value not finite");
    }
    if (v < 0.0) {
      throw Error(ErrorCode::NegativeValue, "activation map value negative");
    }
    total += v;
  }
  if (total <= 0.0) {
    throw Error(ErrorCode::AllZero, "activation map sums to zero");
  }
  double h = 0.0;
  for (double v : map.values) {
    if (v > 0.0) {
      const double p = v / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace patina::metrics
