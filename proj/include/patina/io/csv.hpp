#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "patina/error.hpp"
#include "patina/io/file.hpp"
#include "patina/io/tables.hpp"
#include "patina/metrics/sweep.hpp"

namespace patina::io {

namespace detail {

/// Split into LF-terminated lines, tolerating CRLF and a missing final LF.
inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_double(const std::string& field, size_t line_no, const char* what) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size() || !std::isfinite(v)) {
      throw std::invalid_argument(field);
    }
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedData, std::string("line ") + std::to_string(line_no) +
                                              ": bad " + what + " '" + field + "'");
  }
}

inline std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline void require_header(const std::vector<std::string>& lines, const char* header) {
  if (lines.empty() || lines[0] != header) {
    throw Error(ErrorCode::MalformedData,
                std::string("line 1: expected header '") + header + "'");
  }
}

}  // namespace detail

// ---------------------------------------------------------------- scores

inline ScoreTable parse_score_csv(const std::string& text) {
  const auto lines = detail::split_lines(text);
  detail::require_header(lines, "image_id,score");
  ScoreTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": expected image_id,score");
    }
    const double score = detail::parse_double(fields[1], i + 1, "score");
    if (score < 0.0 || score > 1.0) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": score outside [0,1]");
    }
    if (!table.emplace(fields[0], score).second) {
      throw Error(ErrorCode::DuplicateImageId,
                  "line " + std::to_string(i + 1) + ": duplicate image_id " + fields[0]);
    }
  }
  return table;
}

inline ScoreTable load_score_csv(const std::string& path) {
  return parse_score_csv(read_text_file(path));
}

inline std::string format_score_csv(const ScoreTable& table) {
  std::string out = "image_id,score\n";
  for (const auto& [id, score] : table) {
    out += id + "," + detail::format_score(score) + "\n";
  }
  return out;
}

inline void save_score_csv(const std::string& path, const ScoreTable& table) {
  write_text_file(path, format_score_csv(table));
}

// ---------------------------------------------------------------- labels

inline LabelTable parse_label_csv(const std::string& text) {
  const auto lines = detail::split_lines(text);
  detail::require_header(lines, "image_id,label");
  LabelTable table;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": expected image_id,label");
    }
    int label = -1;
    if (fields[1] == "0") label = 0;
    else if (fields[1] == "1") label = 1;
    else {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": label must be 0 or 1");
    }
    if (!table.emplace(fields[0], label).second) {
      throw Error(ErrorCode::DuplicateImageId,
                  "line " + std::to_string(i + 1) + ": duplicate image_id " + fields[0]);
    }
  }
  return table;
}

inline LabelTable load_label_csv(const std::string& path) {
  return parse_label_csv(read_text_file(path));
}

inline std::string format_label_csv(const LabelTable& table) {
  std::string out = "image_id,label\n";
  for (const auto& [id, label] : table) {
    out += id + "," + std::to_string(label) + "\n";
  }
  return out;
}

// ------------------------------------------------------------ detections

struct DetectionCsvRow {
  std::string image_id;
  bool has_detection = false;
  double x = 0.0, y = 0.0, w = 0.0, h = 0.0;
  double confidence = 0.0;
};

inline std::vector<DetectionCsvRow> parse_detection_csv(const std::string& text) {
  const auto lines = detail::split_lines(text);
  detail::require_header(lines, "image_id,x,y,w,h,confidence");
  std::vector<DetectionCsvRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 6 || fields[0].empty()) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": expected image_id,x,y,w,h,confidence");
    }
    DetectionCsvRow row;
    row.image_id = fields[0];
    bool any = false, all = true;
    for (size_t f = 1; f < 6; ++f) {
      if (fields[f].empty()) all = false; else any = true;
    }
    if (any && !all) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": detection fields must be all set or all empty");
    }
    if (all) {
      row.has_detection = true;
      row.x = detail::parse_double(fields[1], i + 1, "x");
      row.y = detail::parse_double(fields[2], i + 1, "y");
      row.w = detail::parse_double(fields[3], i + 1, "w");
      row.h = detail::parse_double(fields[4], i + 1, "h");
      row.confidence = detail::parse_double(fields[5], i + 1, "confidence");
      if (row.confidence < 0.0 || row.confidence > 1.0) {
        throw Error(ErrorCode::MalformedData,
                    "line " + std::to_string(i + 1) + ": confidence outside [0,1]");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<DetectionCsvRow> load_detection_csv(const std::string& path) {
  return parse_detection_csv(read_text_file(path));
}

inline std::string format_detection_csv(const std::vector<DetectionCsvRow>& rows) {
  std::string out = "image_id,x,y,w,h,confidence\n";
  for (const auto& r : rows) {
    if (r.has_detection) {
      out += r.image_id + "," + detail::format_score(r.x) + "," + detail::format_score(r.y) +
             "," + detail::format_score(r.w) + "," + detail::format_score(r.h) + "," +
             detail::format_score(r.confidence) + "\n";
    } else {
      out += r.image_id + ",,,,,\n";
    }
  }
  return out;
}

// ----------------------------------------------------------------- sweeps

inline std::vector<metrics::SweepRow> parse_sweep_csv(const std::string& text) {
  const auto lines = detail::split_lines(text);
  detail::require_header(lines, "severity,image_id,value");
  std::vector<metrics::SweepRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    if (fields.size() != 3 || fields[1].empty()) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": expected severity,image_id,value");
    }
    metrics::SweepRow row;
    row.severity = detail::parse_double(fields[0], i + 1, "severity");
    if (row.severity < 0.0 || row.severity > 1.0 ||
        std::abs(row.severity * 10.0 - std::round(row.severity * 10.0)) > 1e-9) {
      throw Error(ErrorCode::MalformedData,
                  "line " + std::to_string(i + 1) + ": severity must be a multiple of 0.1 in [0,1]");
    }
    row.image_id = fields[1];
    row.value = detail::parse_double(fields[2], i + 1, "value");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::MalformedData, "sweep file has no data rows");
  }
  return rows;
}

inline std::vector<metrics::SweepRow> load_sweep_csv(const std::string& path) {
  return parse_sweep_csv(read_text_file(path));
}

inline std::string format_sweep_csv(std::vector<metrics::SweepRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const metrics::SweepRow& a, const metrics::SweepRow& b) {
                     if (a.severity != b.severity) return a.severity < b.severity;
                     return a.image_id < b.image_id;
                   });
  std::string out = "severity,image_id,value\n";
  for (const auto& r : rows) {
    char sev[16];
    std::snprintf(sev, sizeof(sev), "%.1f", r.severity);
    out += std::string(sev) + "," + r.image_id + "," + detail::format_score(r.value) + "\n";
  }
  return out;
}

}  // namespace patina::io
