#pragma once

#include "glmbtrack/box.hpp"
#include "glmbtrack/gaussian.hpp"
#include "glmbtrack/mot_io.hpp"
#include "glmbtrack/types.hpp"

#include <vector>

namespace glmb {

struct BirthParams {
  double t_overlapping = 0.3;  // IOU gate confirming a birth candidate
  double r_birth = 0.35;       // existence probability of a confirmed birth
  Vec6 prior_cov_diag = (Vec6() << 20.0 * 20.0, 20.0 * 20.0, 10.0 * 10.0, 10.0 * 10.0,
                         10.0 * 10.0, 10.0 * 10.0)
                            .finished();
};

/// A confirmed two-frame birth candidate: an unassigned measurement from
/// frame k-1 backed by at least one overlapping measurement at frame k.
struct BirthPoint {
  Box origin;                   // unassigned box at frame k-1
  TrackLabel label;             // birth_time = k-1
  double r_birth = 0.35;
  std::vector<int> valid_meas;  // overlapping current-frame measurement indices
};

/// Labeled multi-Bernoulli birth density: one point per fresh label with an
/// existence probability and a Gaussian prior.
struct BirthDensity {
  struct Point {
    TrackLabel label;
    double r_birth = 0.35;
    GaussianComponent prior;      // weight 1
    std::vector<int> valid_meas;  // first-update association gate
  };
  std::vector<Point> points;
};

/// Two-frame birth proposal: a previous unassigned box becomes a birth point
/// iff some current measurement overlaps it with IOU > t_overlapping;
/// valid_meas collects exactly those measurements. Labels carry
/// birth_time = prev_frame with ordinals in input order.
std::vector<BirthPoint> propose_birth_points(const std::vector<Box>& unassigned_prev,
                                             const DetectionFrame& current, int prev_frame,
                                             double t_overlapping, double r_birth);

/// Gaussian priors for confirmed birth points: mean centered on the origin
/// box with velocity from the displacement to the best-overlapping current
/// measurement, divided by dt.
BirthDensity build_birth_density(const std::vector<BirthPoint>& points,
                                 const DetectionFrame& current, const BirthParams& params,
                                 double dt = 1.0);

}  // namespace glmb
