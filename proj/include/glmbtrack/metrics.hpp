#pragma once

#include "glmbtrack/mot_io.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace glmb {

struct FrameMatchLog {
  int frame = 0;
  int fp = 0;
  int fn = 0;
  int idsw = 0;
  std::vector<std::tuple<int, int, double>> matches;  // (gt_id, hyp_id, iou)
};

struct EvalReport {
  double mota = 0.0;       // percent
  double motp = 0.0;       // percent, mean IOU over matches
  double mt_pct = 0.0;     // trajectories covered >= 80%
  double ml_pct = 0.0;     // trajectories covered <= 20%
  double precision = 0.0;  // percent, TP / (TP + FP)
  long long fp = 0;
  long long fn = 0;
  long long idsw = 0;
  long long tp = 0;
  long long total_gt = 0;
  int gt_tracks = 0;
  int mostly_tracked = 0;
  int mostly_lost = 0;
  std::vector<FrameMatchLog> frames;

  std::string table() const;
  std::string csv() const;
};

/// CLEAR-MOT evaluation. Per frame, previous matches persist while still
/// above iou_thresh; remaining pairs are matched by minimum-cost bipartite
/// matching on (1 - IOU) among pairs with IOU >= iou_thresh. A matched
/// ground-truth object whose hypothesis id changed since its last match
/// counts as one ID switch.
EvalReport evaluate(const std::vector<TrackRecord>& gt, const std::vector<TrackRecord>& hyp,
                    double iou_thresh = 0.5);

}  // namespace glmb
