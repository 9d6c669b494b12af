#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "patina/codec.hpp"
#include "patina/error.hpp"
#include "patina/face/geometry.hpp"
#include "patina/image.hpp"
#include "patina/subprocess.hpp"

namespace patina::face {

struct Detection {
  BBox bbox;
  double confidence = 0.0;
};

/// Pluggable face detector. detect() returns the highest-confidence face or
/// nullopt when no face is found; invocation failures throw DetectorError.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::optional<Detection> detect(const RasterImage& img,
                                          const std::string& image_id) = 0;
  // Detectors that cannot run concurrently return false; the recovery
  // orchestrator then serializes calls.
  virtual bool thread_safe() const { return true; }
};

/// Detections preloaded from records keyed by image_id; the image content is
/// ignored. Ids without a record (or with an empty record) yield nullopt.
class FileDetector : public Detector {
 public:
  explicit FileDetector(std::map<std::string, std::optional<Detection>> records)
      : records_(std::move(records)) {}

  std::optional<Detection> detect(const RasterImage&, const std::string& image_id) override {
    auto it = records_.find(image_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, std::optional<Detection>> records_;
};

/// External detector program. The argv template's {input} placeholder gets a
/// temp PNG path; stdout must be one DetectionRecord CSV line
/// (image_id,x,y,w,h,confidence; empty fields after image_id = no face).
class CommandDetector : public Detector {
 public:
  explicit CommandDetector(std::vector<std::string> argv_template)
      : argv_template_(std::move(argv_template)) {
    if (argv_template_.empty()) {
      throw Error(ErrorCode::DetectorError, "detector command is empty");
    }
  }

  std::optional<Detection> detect(const RasterImage& img, const std::string& image_id) override {
    const std::string path = temp_png_path();
    save_png(path, img);
    CommandResult res;
    try {
      res = run_command(substitute_argv(argv_template_, "{input}", path));
    } catch (const Error& e) {
      std::remove(path.c_str());
      throw Error(ErrorCode::DetectorError, std::string("detector: ") + e.what());
    }
    std::remove(path.c_str());
    if (res.exit_code != 0) {
      throw Error(ErrorCode::DetectorError,
                  "detector command exited with status " + std::to_string(res.exit_code));
    }
    return parse_detection_line(res.out, image_id);
  }

  bool thread_safe() const override { return false; }

  /// Parse one `image_id,x,y,w,h,confidence` line; a leading header line is
  /// tolerated. Empty numeric fields mean "no face".
  static std::optional<Detection> parse_detection_line(const std::string& text,
                                                       const std::string& image_id) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.rfind("image_id,", 0) == 0) continue;
      std::vector<std::string> fields;
      std::string field;
      std::istringstream ls(line);
      while (std::getline(ls, field, ',')) fields.push_back(field);
      while (fields.size() < 6) fields.emplace_back();
      if (fields.size() != 6) {
        throw Error(ErrorCode::DetectorError, "detector output has too many fields: " + line);
      }
      bool any = false, all = true;
      for (size_t i = 1; i < 6; ++i) {
        if (fields[i].empty()) all = false; else any = true;
      }
      if (!any) return std::nullopt;
      if (!all) {
        throw Error(ErrorCode::DetectorError,
                    "detector output mixes empty and non-empty fields for " + image_id);
      }
      try {
        Detection d;
        d.bbox = BBox{std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3]),
                      std::stod(fields[4])};
        d.confidence = std::stod(fields[5]);
        return d;
      } catch (const std::exception&) {
        throw Error(ErrorCode::DetectorError, "detector output not numeric: " + line);
      }
    }
    throw Error(ErrorCode::DetectorError, "detector produced no output line");
  }

 private:
  static std::string temp_png_path() {
    static std::atomic<uint64_t> counter{0};
    const char* tmp = std::getenv("TMPDIR");
    std::string dir = tmp && *tmp ? tmp : "/tmp";
    return dir + "/patina-det-" + std::to_string(getpid()) + "-" +
           std::to_string(counter.fetch_add(1)) + ".png";
  }

  std::vector<std::string> argv_template_;
};

}  // namespace patina::face
