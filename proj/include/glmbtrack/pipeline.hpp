#pragma once

#include "glmbtrack/config.hpp"
#include "glmbtrack/estimator.hpp"
#include "glmbtrack/glmb.hpp"
#include "glmbtrack/metrics.hpp"
#include "glmbtrack/mot_io.hpp"
#include "glmbtrack/reappearance.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace glmb {

struct TrackerFrameLog {
  int frame = 0;
  int measurements = 0;
  int hypotheses = 0;
  int unassigned = 0;
  int lut_occ = 0;
  int lut_miss = 0;
  int recovered = 0;
  int estimated = 0;
  int left_scene = 0;
  int categorized_occ = 0;
  int categorized_miss = 0;
  int idsw_removed = 0;
  int unverified = 0;

  std::string to_line() const;  // key=value pairs
};

/// Per-frame tracking loop: predict with adaptive birth, measurement update,
/// ID-switch recovery, categorization of disappeared tracks, then the
/// occlusion and miss-detection one-step filters. Frames must be stepped in
/// order starting at 1.
class Tracker {
 public:
  Tracker(const RunConfig& cfg, FeatureProvider* features);

  struct FrameResult {
    EstimateSet estimate;
    std::vector<TrackRecord> records;
    TrackerFrameLog log;
  };

  FrameResult step(const DetectionFrame& z);

  const GlmbDensity& density() const { return density_; }
  const LookupTable& lut_occluded() const { return lut_occ_; }
  const LookupTable& lut_missed() const { return lut_miss_; }

 private:
  ColorHistogram histogram_at(int frame, int det_index, const Box& box);

  RunConfig cfg_;
  FeatureProvider* features_;  // may be null: degraded appearance mode
  GlmbDensity density_ = GlmbDensity::prior(0);
  EstimateSet est_prev_;
  std::vector<Box> unassigned_prev_;
  LookupTable lut_occ_;
  LookupTable lut_miss_;

  struct Reference {
    AppearanceDescriptor descriptor;
    int frame = -1;
  };
  std::map<TrackLabel, Reference> store_;  // last confirmed appearance per label

  std::map<TrackLabel, int> label_ids_;
  int next_id_ = 1;
};

struct RunSummary {
  int frames = 0;
  int records = 0;
  ParseStats parse_stats;
};

/// Batch tracking: parses detections, builds the configured feature source,
/// steps the tracker over every frame, writes the results file and a
/// key=value run log next to it (<out>.log).
RunSummary run_track(const RunConfig& cfg, const std::string& det_path,
                     const std::string& feature_root, const std::string& out_path);

/// Evaluation: parses both files, runs the CLEAR-MOT evaluation, prints the
/// report table to `out` and optionally writes the CSV.
EvalReport run_eval(const std::string& gt_path, const std::string& hyp_path, double iou_thresh,
                    std::ostream& out, const std::string& csv_path = "");

/// Scenario generation into out_dir (gt.txt, det.txt, features.txt).
void run_generate(const std::string& spec_name_or_path, const std::string& out_dir,
                  std::uint64_t seed);

}  // namespace glmb
