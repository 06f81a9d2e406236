#include "glmbtrack/birth.hpp"

namespace glmb {

std::vector<BirthPoint> propose_birth_points(const std::vector<Box>& unassigned_prev,
                                             const DetectionFrame& current, int prev_frame,
                                             double t_overlapping, double r_birth) {
  std::vector<BirthPoint> out;
  for (const Box& z : unassigned_prev) {
    std::vector<int> valid;
    for (std::size_t j = 0; j < current.detections.size(); ++j) {
      if (iou(z, current.detections[j].box) > t_overlapping) {
        valid.push_back(static_cast<int>(j));
      }
    }
    if (valid.empty()) continue;
    BirthPoint p;
    p.origin = z;
    p.label = TrackLabel{prev_frame, static_cast<int>(out.size())};
    p.r_birth = r_birth;
    p.valid_meas = std::move(valid);
    out.push_back(std::move(p));
  }
  return out;
}

BirthDensity build_birth_density(const std::vector<BirthPoint>& points,
                                 const DetectionFrame& current, const BirthParams& params,
                                 double dt) {
  BirthDensity density;
  for (const BirthPoint& p : points) {
    // Velocity prior from the displacement to the best-overlapping match.
    int best = p.valid_meas.front();
    double best_iou = -1.0;
    for (int j : p.valid_meas) {
      const double o = iou(p.origin, current.detections[j].box);
      if (o > best_iou) {
        best_iou = o;
        best = j;
      }
    }
    const Box& matched = current.detections[best].box;

    BirthDensity::Point bp;
    bp.label = p.label;
    bp.r_birth = p.r_birth;
    bp.valid_meas = p.valid_meas;
    bp.prior.weight = 1.0;
    bp.prior.mean << p.origin.cx(), p.origin.cy(), (matched.cx() - p.origin.cx()) / dt,
        (matched.cy() - p.origin.cy()) / dt, p.origin.width, p.origin.height;
    bp.prior.covariance = params.prior_cov_diag.asDiagonal();
    density.points.push_back(std::move(bp));
  }
  return density;
}

}  // namespace glmb
