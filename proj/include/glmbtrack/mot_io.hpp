#pragma once

#include "glmbtrack/appearance.hpp"
#include "glmbtrack/box.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace glmb {

struct Detection {
  Box box;
  double confidence = 1.0;
};

/// Time-indexed measurement set, 1-based frame numbering.
struct DetectionFrame {
  int frame = 1;
  std::vector<Detection> detections;
};

struct TrackRecord {
  int frame = 1;
  int track_id = 1;
  Box box;
  double confidence = 1.0;

  friend bool operator==(const TrackRecord&, const TrackRecord&) = default;
};

struct ParseStats {
  int dropped_nonpositive = 0;  // rows with non-positive width/height
  int dropped_low_confidence = 0;
};

/// Parses MOTChallenge detection CSV rows
/// "frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z". The id and
/// x,y,z fields are ignored; rows below conf_thresh or with non-positive
/// sizes are dropped (counted in stats). Output is grouped by frame and
/// sorted. Malformed rows raise std::runtime_error with the line number.
std::vector<DetectionFrame> parse_detections(const std::string& path, double conf_thresh = 0.0,
                                             ParseStats* stats = nullptr);

/// Parses result/ground-truth rows keeping frame, id, box and confidence.
std::vector<TrackRecord> parse_results(const std::string& path);

/// Writes records in the detection CSV schema with conf=1 and x=y=z=-1.
/// Numbers are formatted as integers when integral, otherwise with up to
/// two decimals. Records must be sorted by (frame, track_id).
void write_results(const std::vector<TrackRecord>& records, const std::string& path);

std::string format_results(const std::vector<TrackRecord>& records);

/// Per-detection appearance source. Implementations must be safe for
/// concurrent reads.
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;

  /// Histogram for detection det_index (0-based within its frame) with the
  /// given box. Returns the sentinel histogram when the source is missing.
  virtual ColorHistogram histogram(int frame, int det_index, const Box& box) = 0;

  virtual int warning_count() const { return 0; }
};

enum class FeatureMode { none, images, features, synthetic };

FeatureMode feature_mode_from_string(const std::string& s);
std::string to_string(FeatureMode mode);

/// Feature source factory.
///  - images: root holds img1/NNNNNN.jpg frames; boxes are cropped and
///    converted to HSV histograms. Missing frames give the sentinel.
///  - features / synthetic: root is a text file with one row per detection:
///    frame,det_index followed by 512 comma-separated floats.
///  - none: always the sentinel (degraded appearance mode).
std::unique_ptr<FeatureProvider> frame_provider(FeatureMode mode, const std::string& root);

/// In-memory provider keyed by (frame, det_index); used by the scenario
/// generator and tests.
class MapFeatureProvider : public FeatureProvider {
 public:
  void put(int frame, int det_index, ColorHistogram h) {
    table_[{frame, det_index}] = std::move(h);
  }
  ColorHistogram histogram(int frame, int det_index, const Box&) override {
    auto it = table_.find({frame, det_index});
    return it == table_.end() ? ColorHistogram() : it->second;
  }

  const std::map<std::pair<int, int>, ColorHistogram>& table() const { return table_; }

 private:
  std::map<std::pair<int, int>, ColorHistogram> table_;
};

/// Writes a MapFeatureProvider table in the feature-file format.
void write_features(const std::map<std::pair<int, int>, ColorHistogram>& table,
                    const std::string& path);

}  // namespace glmb
