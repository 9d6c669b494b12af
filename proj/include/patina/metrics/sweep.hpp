#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "patina/error.hpp"

namespace patina::metrics {

struct SweepRow {
  double severity = 0.0;
  std::string image_id;
  double value = 0.0;
};

enum class SweepStat { Mean, Median };

inline const char* sweep_stat_name(SweepStat s) {
  return s == SweepStat::Mean ? "mean" : "median";
}

struct SweepPoint {
  double severity = 0.0;
  double aggregate = 0.0;
  size_t count = 0;
};

/// Group rows by severity, aggregate with the chosen statistic, emit sorted
/// by severity ascending.
inline std::vector<SweepPoint> sweep_aggregate(const std::vector<SweepRow>& rows,
                                               SweepStat stat) {
  if (rows.empty()) {
    throw Error(ErrorCode::EmptyInput, "sweep has no rows");
  }
  std::map<double, std::vector<double>> groups;
  for (const auto& row : rows) groups[row.severity].push_back(row.value);
  std::vector<SweepPoint> out;
  out.reserve(groups.size());
  for (auto& [severity, values] : groups) {
    SweepPoint p;
    p.severity = severity;
    p.count = values.size();
    if (stat == SweepStat::Mean) {
      double sum = 0.0;
      for (double v : values) sum += v;
      p.aggregate = sum / static_cast<double>(values.size());
    } else {
      std::sort(values.begin(), values.end());
      const size_t mid = values.size() / 2;
      p.aggregate = values.size() % 2 == 1 ? values[mid]
                                           : (values[mid - 1] + values[mid]) / 2.0;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace patina::metrics
