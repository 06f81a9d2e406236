#include "glmbtrack/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace glmb {

namespace {

bool all_finite(const GaussianComponent& c) {
  return std::isfinite(c.weight) && c.mean.allFinite() && c.covariance.allFinite();
}

Mat6 symmetrize(const Mat6& m) { return 0.5 * (m + m.transpose()); }

struct Innovation {
  Vec4 residual;
  Mat4 S;            // H P H^T + R, symmetrized
  Eigen::LLT<Mat4> llt;
};

Innovation innovation_of(const GaussianComponent& comp, const Vec4& z,
                         const MeasurementModel& model) {
  Innovation inn;
  inn.residual = z - model.H * comp.mean;
  Mat4 S = model.H * comp.covariance * model.H.transpose() + model.R;
  inn.S = 0.5 * (S + S.transpose());
  inn.llt.compute(inn.S);
  if (inn.llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(inn.S);
    std::ostringstream msg;
    msg << "kalman_update: innovation covariance not positive definite"
        << " (eigenvalues min=" << es.eigenvalues().minCoeff()
        << " max=" << es.eigenvalues().maxCoeff() << ")";
    throw std::runtime_error(msg.str());
  }
  return inn;
}

double likelihood_from(const Innovation& inn) {
  const Vec4 w = inn.llt.solve(inn.residual);
  const double maha2 = inn.residual.dot(w);
  // |S| from the Cholesky factor diagonal
  double log_det = 0.0;
  const Mat4 L = inn.llt.matrixL();
  for (int i = 0; i < 4; ++i) log_det += 2.0 * std::log(L(i, i));
  const double log_norm = -0.5 * (state::kMeasDim * std::log(2.0 * std::numbers::pi) + log_det);
  return std::exp(log_norm - 0.5 * maha2);
}

}  // namespace

MotionModel MotionModel::constant_velocity(double dt, const Vec6& q_diag) {
  MotionModel m;
  m.dt = dt;
  m.F = Mat6::Identity();
  m.F(state::kPx, state::kVx) = dt;
  m.F(state::kPy, state::kVy) = dt;
  m.Q = q_diag.asDiagonal();
  return m;
}

MeasurementModel MeasurementModel::position_size(const Vec4& r_diag) {
  MeasurementModel m;
  m.H.setZero();
  m.H(0, state::kPx) = 1.0;
  m.H(1, state::kPy) = 1.0;
  m.H(2, state::kW) = 1.0;
  m.H(3, state::kH) = 1.0;
  m.R = r_diag.asDiagonal();
  return m;
}

GaussianComponent kalman_predict(const GaussianComponent& comp, const MotionModel& model) {
  if (!all_finite(comp)) {
    throw std::invalid_argument("kalman_predict: non-finite component");
  }
  GaussianComponent out;
  out.weight = comp.weight;
  out.mean = model.F * comp.mean;
  out.covariance = symmetrize(model.F * comp.covariance * model.F.transpose() + model.Q);
  return out;
}

KalmanUpdateResult kalman_update(const GaussianComponent& comp, const Vec4& z,
                                 const MeasurementModel& model) {
  if (!all_finite(comp) || !z.allFinite()) {
    throw std::invalid_argument("kalman_update: non-finite input");
  }
  const Innovation inn = innovation_of(comp, z, model);

  // Gain K = P H^T S^-1 via the Cholesky solve.
  Eigen::Matrix<double, 6, 4> PHt = comp.covariance * model.H.transpose();
  Eigen::Matrix<double, 6, 4> K = inn.llt.solve(PHt.transpose()).transpose();

  KalmanUpdateResult out;
  out.posterior.weight = comp.weight;
  out.posterior.mean = comp.mean + K * inn.residual;
  const Mat6 IKH = Mat6::Identity() - K * model.H;
  out.posterior.covariance =
      symmetrize(IKH * comp.covariance * IKH.transpose() + K * model.R * K.transpose());
  out.likelihood = likelihood_from(inn);
  return out;
}

double gaussian_likelihood(const GaussianComponent& comp, const Vec4& z,
                           const MeasurementModel& model) {
  return likelihood_from(innovation_of(comp, z, model));
}

double innovation_mahalanobis(const GaussianComponent& comp, const Vec4& z,
                              const MeasurementModel& model) {
  const Innovation inn = innovation_of(comp, z, model);
  return std::sqrt(inn.residual.dot(inn.llt.solve(inn.residual)));
}

std::vector<GaussianComponent> mixture_prune_merge(std::vector<GaussianComponent> mix,
                                                   double prune_thresh, double merge_dist,
                                                   std::size_t max_components) {
  double total_in = 0.0;
  for (const auto& c : mix) total_in += c.weight;

  std::erase_if(mix, [&](const GaussianComponent& c) { return c.weight < prune_thresh; });

  // Greedy merge around the heaviest remaining component.
  std::vector<GaussianComponent> merged;
  std::vector<bool> used(mix.size(), false);
  while (true) {
    int pivot = -1;
    double best_w = -1.0;
    for (std::size_t i = 0; i < mix.size(); ++i) {
      if (!used[i] && mix[i].weight > best_w) {
        best_w = mix[i].weight;
        pivot = static_cast<int>(i);
      }
    }
    if (pivot < 0) break;

    const Eigen::LLT<Mat6> llt(symmetrize(mix[pivot].covariance) +
                               1e-12 * Mat6::Identity());
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < mix.size(); ++i) {
      if (used[i]) continue;
      bool close = static_cast<int>(i) == pivot;
      if (!close) {
        const Vec6 d = mix[i].mean - mix[pivot].mean;
        close = d.dot(llt.solve(d)) <= merge_dist * merge_dist;
      }
      if (close) {
        group.push_back(i);
        used[i] = true;
      }
    }

    GaussianComponent g;
    g.weight = 0.0;
    g.mean.setZero();
    for (std::size_t i : group) {
      g.weight += mix[i].weight;
      g.mean += mix[i].weight * mix[i].mean;
    }
    g.mean /= g.weight;
    Mat6 cov = Mat6::Zero();
    for (std::size_t i : group) {
      const Vec6 d = mix[i].mean - g.mean;
      cov += mix[i].weight * (mix[i].covariance + d * d.transpose());
    }
    g.covariance = symmetrize(cov / g.weight);
    merged.push_back(std::move(g));
  }

  std::stable_sort(merged.begin(), merged.end(),
                   [](const auto& a, const auto& b) { return a.weight > b.weight; });
  if (merged.size() > max_components) merged.resize(max_components);

  double total_out = 0.0;
  for (const auto& c : merged) total_out += c.weight;
  if (total_out > 0.0) {
    const double scale = total_in / total_out;
    for (auto& c : merged) c.weight *= scale;
  }
  return merged;
}

Vec6 mixture_mean(const std::vector<GaussianComponent>& mix) {
  Vec6 m = Vec6::Zero();
  double total = 0.0;
  for (const auto& c : mix) {
    m += c.weight * c.mean;
    total += c.weight;
  }
  if (total > 0.0) m /= total;
  return m;
}

double mixture_likelihood(const std::vector<GaussianComponent>& mix, const Vec4& z,
                          const MeasurementModel& model) {
  double q = 0.0;
  double total = 0.0;
  for (const auto& c : mix) {
    q += c.weight * gaussian_likelihood(c, z, model);
    total += c.weight;
  }
  return total > 0.0 ? q / total : 0.0;
}

double mixture_min_mahalanobis(const std::vector<GaussianComponent>& mix, const Vec4& z,
                               const MeasurementModel& model) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : mix) {
    best = std::min(best, innovation_mahalanobis(c, z, model));
  }
  return best;
}

void normalize_mixture(std::vector<GaussianComponent>& mix) {
  double total = 0.0;
  for (const auto& c : mix) total += c.weight;
  if (total <= 0.0) return;
  for (auto& c : mix) c.weight /= total;
}

}  // namespace glmb
