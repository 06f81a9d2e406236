#pragma once

#include "glmbtrack/appearance.hpp"
#include "glmbtrack/birth.hpp"
#include "glmbtrack/gaussian.hpp"
#include "glmbtrack/mot_io.hpp"
#include "glmbtrack/types.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace glmb {

/// Raised when truncation or refinement would leave an empty hypothesis pool.
struct PoolExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when the update step ends with no viable hypotheses.
struct FilterDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FilterParams {
  double p_detect = 0.9;
  double p_survive = 0.99;
  /// Clutter intensity over the 4-D measurement space (cx, cy, w, h).
  /// Default sized for ~10 false alarms per frame on a 1920x1080 image with
  /// pedestrian-scale boxes.
  double clutter_intensity = 2e-7;
  int max_hypotheses = 1000;
  double min_hyp_weight = 1e-5;
  int k_predict = 100;        // survive/die + birth subsets kept per parent
  int k_update = 300;         // ranked-assignment budget split by parent weight
  double gate_mahalanobis = 5.0;

  // Per-track mixture hygiene applied after each update.
  double mixture_prune_thresh = 1e-5;
  double mixture_merge_dist = 4.0;
  int mixture_max_components = 20;

  MotionModel motion = MotionModel::constant_velocity(
      1.0, (Vec6() << 25.0, 25.0, 4.0, 4.0, 9.0, 9.0).finished());
  MeasurementModel measurement =
      MeasurementModel::position_size(Vec4(100.0, 100.0, 100.0, 100.0));
};

/// One hypothesized object inside a hypothesis: label plus a Gaussian
/// mixture over its kinematic state.
struct LabeledGaussianTrack {
  TrackLabel label;
  std::vector<GaussianComponent> mixture;  // weights sum to 1
  std::shared_ptr<const AppearanceDescriptor> appearance;
  int last_update = -1;         // frame of last measurement association
  std::vector<int> birth_gate;  // measurement indices allowed at the first
                                // update after birth; empty = unrestricted
};

/// One (label set, association history) component of the density.
/// History entries are 0 for a missed frame, j >= 1 for measurement j-1
/// of that frame.
struct GlmbHypothesis {
  std::vector<TrackLabel> labels;  // sorted, distinct
  std::map<TrackLabel, std::vector<int>> assoc_history;
  double weight = 0.0;
  std::map<TrackLabel, LabeledGaussianTrack> tracks;

  bool contains(const TrackLabel& l) const;
  int cardinality() const { return static_cast<int>(labels.size()); }
};

/// The filtering density: a normalized set of hypotheses.
struct GlmbDensity {
  std::vector<GlmbHypothesis> hypotheses;
  int frame = 0;

  static GlmbDensity prior(int frame);  // single empty hypothesis, weight 1

  double total_weight() const;
  void normalize();
};

/// Prediction: per parent, the joint survive/die and birth subsets are
/// ranked by a k-shortest-path search over one survive/die arc pair per
/// existing label and one born/skip pair per birth point; per-label
/// densities are Kalman-predicted and birth labels get their priors.
/// Children sharing (label set, per-label histories) are merged.
GlmbDensity predict(const GlmbDensity& d, const BirthDensity& birth, const FilterParams& params);

struct UpdateResult {
  GlmbDensity density;
  std::vector<int> unassigned;  // measurements unused by the best hypothesis
  int best_hypothesis = -1;
};

/// Measurement update: per parent hypothesis a cost matrix of association
/// negative log-likelihoods (detection columns P_D g / kappa, one miss
/// column per track at 1 - P_D) is expanded with Murty's algorithm; the
/// result is normalized, truncated to max_hypotheses, and cleaned of
/// weights below min_hyp_weight.
UpdateResult update(const GlmbDensity& d, const DetectionFrame& z, const FilterParams& params);

/// rho(n) = sum of weights of hypotheses with |labels| = n.
std::vector<double> cardinality_distribution(const GlmbDensity& d);

/// Removes every hypothesis containing the label and renormalizes.
/// Throws PoolExhausted when that would empty the pool.
GlmbDensity remove_hypotheses_with_label(const GlmbDensity& d, const TrackLabel& label);

/// Removes one hypothesis by index and renormalizes; throws PoolExhausted
/// when it is the last one.
GlmbDensity remove_hypothesis_at(const GlmbDensity& d, int index);

/// Measurement indices (0-based) not associated by this hypothesis in the
/// current frame (the last history entry per label).
std::vector<int> unassigned_measurements(const GlmbHypothesis& hyp, int measurement_count);

}  // namespace glmb
