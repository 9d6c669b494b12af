#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "patina/error.hpp"
#include "patina/io/tables.hpp"

namespace patina::metrics {

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> r;  // names.size() squared, symmetric
};

/// Pairwise Pearson r over id-aligned score vectors. All tables must share
/// one id set of size >= 2 and have non-zero variance. Diagonal is exactly 1.
inline CorrelationMatrix pearson_matrix(
    const std::vector<std::pair<std::string, ScoreTable>>& tables) {
  if (tables.empty()) {
    throw Error(ErrorCode::EmptyInput, "need at least one score table");
  }
  const ScoreTable& first = tables.front().second;
  if (first.size() < 2) {
    throw Error(ErrorCode::IdMismatch, "correlation needs at least 2 shared ids");
  }
  for (const auto& [name, t] : tables) {
    std::set<std::string> diff;
    for (const auto& [id, v] : t)
      if (!first.count(id)) diff.insert(id);
    for (const auto& [id, v] : first)
      if (!t.count(id)) diff.insert(id);
    if (!diff.empty()) {
      std::string msg = "table '" + name + "' id set differs:";
      for (const auto& id : diff) msg += " " + id;
      throw Error(ErrorCode::IdMismatch, msg);
    }
  }

  const size_t n = first.size();
  const size_t k = tables.size();
  // Column vectors in the shared (sorted) id order.
  std::vector<std::vector<double>> cols(k);
  std::vector<double> means(k, 0.0), sds(k, 0.0);
  for (size_t t = 0; t < k; ++t) {
    cols[t].reserve(n);
    for (const auto& [id, v] : first) cols[t].push_back(tables[t].second.at(id));
    double mean = 0.0;
    for (double v : cols[t]) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : cols[t]) var += (v - mean) * (v - mean);
    if (var == 0.0) {
      throw Error(ErrorCode::ZeroVariance, "table '" + tables[t].first + "' has zero variance");
    }
    means[t] = mean;
    sds[t] = std::sqrt(var);
  }

  CorrelationMatrix m;
  m.names.reserve(k);
  for (const auto& [name, t] : tables) m.names.push_back(name);
  m.r.assign(k, std::vector<double>(k, 1.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      double cov = 0.0;
      for (size_t row = 0; row < n; ++row) {
        cov += (cols[i][row] - means[i]) * (cols[j][row] - means[j]);
      }
      const double r = cov / (sds[i] * sds[j]);
      m.r[i][j] = r;
      m.r[j][i] = r;
    }
  }
  return m;
}

}  // namespace patina::metrics
