#pragma once

#include "glmbtrack/types.hpp"

#include <cstddef>
#include <vector>

namespace glmb {

/// One weighted Gaussian over the 6-D kinematic state.
struct GaussianComponent {
  double weight = 1.0;
  Vec6 mean = Vec6::Zero();
  Mat6 covariance = Mat6::Identity();
};

/// Constant-velocity transition model: x' = F x + w, w ~ N(0, Q).
/// F shifts position by dt * velocity and keeps velocity and size.
struct MotionModel {
  Mat6 F = Mat6::Identity();
  Mat6 Q = Mat6::Zero();
  double dt = 1.0;

  static MotionModel constant_velocity(double dt, const Vec6& q_diag);
};

/// Linear observation of (px, py, w, h): z = H x + v, v ~ N(0, R).
struct MeasurementModel {
  Mat46 H = Mat46::Zero();
  Mat4 R = Mat4::Identity();

  static MeasurementModel position_size(const Vec4& r_diag);
};

GaussianComponent kalman_predict(const GaussianComponent& comp, const MotionModel& model);

struct KalmanUpdateResult {
  GaussianComponent posterior;
  double likelihood = 0.0;  // N(z; H mean, H cov H^T + R)
};

/// Conjugate update with Joseph-form covariance (keeps the posterior
/// covariance symmetric over long runs). Throws on a singular or badly
/// conditioned innovation covariance.
KalmanUpdateResult kalman_update(const GaussianComponent& comp, const Vec4& z,
                                 const MeasurementModel& model);

/// Marginal measurement likelihood N(z; H mean, H cov H^T + R) without
/// computing the posterior.
double gaussian_likelihood(const GaussianComponent& comp, const Vec4& z,
                           const MeasurementModel& model);

/// Mahalanobis distance of z in innovation space.
double innovation_mahalanobis(const GaussianComponent& comp, const Vec4& z,
                              const MeasurementModel& model);

/// Gaussian-mixture hygiene: drop components with weight below prune_thresh,
/// merge components within `merge_dist` Mahalanobis distance of a heavier one
/// (moment matching), keep at most max_components by weight, and rescale so
/// the total weight equals the input total.
std::vector<GaussianComponent> mixture_prune_merge(std::vector<GaussianComponent> mix,
                                                   double prune_thresh, double merge_dist,
                                                   std::size_t max_components);

/// Weighted mean of a mixture (weights need not be normalized).
Vec6 mixture_mean(const std::vector<GaussianComponent>& mix);

double mixture_likelihood(const std::vector<GaussianComponent>& mix, const Vec4& z,
                          const MeasurementModel& model);

double mixture_min_mahalanobis(const std::vector<GaussianComponent>& mix, const Vec4& z,
                               const MeasurementModel& model);

void normalize_mixture(std::vector<GaussianComponent>& mix);

}  // namespace glmb
