#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "patina/error.hpp"
#include "patina/io/tables.hpp"

namespace patina::metrics {

namespace detail {

inline void require_same_ids(const ScoreTable& scores, const LabelTable& labels) {
  std::set<std::string> diff;
  for (const auto& [id, v] : scores)
    if (!labels.count(id)) diff.insert(id);
  for (const auto& [id, v] : labels)
    if (!scores.count(id)) diff.insert(id);
  if (!diff.empty()) {
    std::string msg = "score/label id sets differ:";
    for (const auto& id : diff) msg += " " + id;
    throw Error(ErrorCode::IdMismatch, msg);
  }
}

}  // namespace detail

/// ROC-AUC via the Mann-Whitney rank statistic with midrank tie handling:
/// AUC = (R_pos - n_pos(n_pos+1)/2) / (n_pos * n_neg), R_pos the midrank sum
/// of positive-class scores. Ties across classes contribute 1/2 per pair.
inline double roc_auc(const ScoreTable& scores, const LabelTable& labels) {
  detail::require_same_ids(scores, labels);
  struct Row {
    double score;
    int label;
  };
  std::vector<Row> rows;
  rows.reserve(scores.size());
  size_t n_pos = 0, n_neg = 0;
  for (const auto& [id, s] : scores) {
    const int label = labels.at(id);
    if (label != 0 && label != 1) {
      throw Error(ErrorCode::MalformedData, "label must be 0 or 1 for " + id);
    }
    rows.push_back({s, label});
    (label == 1 ? n_pos : n_neg)++;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::SingleClass, "AUC needs both classes present");
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.score < b.score; });
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < rows.size()) {
    size_t j = i;
    while (j < rows.size() && rows[j].score == rows[i].score) ++j;
    // 1-based ranks i+1 .. j share the midrank (i+1 + j) / 2.
    const double midrank = (static_cast<double>(i) + 1.0 + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k < j; ++k) {
      if (rows[k].label == 1) rank_sum_pos += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace patina::metrics
