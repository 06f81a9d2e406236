#pragma once

#include "glmbtrack/glmb.hpp"
#include "glmbtrack/types.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace glmb {

/// The objects read out of one chosen hypothesis.
struct EstimateSet {
  int frame = 0;
  std::vector<std::pair<TrackLabel, Vec6>> objects;  // sorted by label
  int source_hypothesis = -1;

  bool has(const TrackLabel& l) const;
  const Vec6* state_of(const TrackLabel& l) const;
};

/// MAP cardinality: argmax of the cardinality distribution, ties toward the
/// smaller count.
int map_cardinality(const GlmbDensity& d);

/// Index of the maximum-weight hypothesis among those with |labels| = n;
/// ties broken by lexicographically smaller label set. Throws
/// std::out_of_range when no hypothesis has that cardinality.
int select_hypothesis(const GlmbDensity& d, int n);

/// Per-label state = mixture mean. Width/height are clamped positive.
EstimateSet extract_states(const GlmbHypothesis& hyp, int frame, int source_hypothesis = -1);

struct RecoveryThresholds {
  double t_size = 0.4;
  double t_color = 0.5;
  double t_weight = 1e-3;  // floor on the re-chosen hypothesis weight
};

/// Appearance access for label verification. Either check returns nullopt
/// when no reference is available, which skips that check.
class VerificationFeatures {
 public:
  virtual ~VerificationFeatures() = default;

  /// Color similarity in [0, 1] between the label's appearance under
  /// hypothesis h at the current frame and its last confirmed appearance.
  virtual std::optional<double> color_similarity(const TrackLabel& label,
                                                 const GlmbHypothesis& h) const = 0;

  /// Box size (w, h) at the label's last confirmed frame.
  virtual std::optional<std::pair<double, double>> reference_size(
      const TrackLabel& label) const = 0;
};

struct RecoveryResult {
  GlmbDensity density;
  EstimateSet estimate;
  std::vector<TrackLabel> unverified;  // routed to miss-detection handling
  int removed_hypotheses = 0;
};

/// Label-consistency loop: while some label present in both frames fails the
/// size or color check, the chosen hypothesis is removed (weights
/// renormalized) and cardinality estimation plus state extraction rerun.
/// The loop stops when every shared label verifies or the re-chosen
/// hypothesis weight drops below t_weight; in that case the last removal is
/// rolled back and the failing labels are returned as unverified, excluded
/// from the estimate.
RecoveryResult id_switch_recovery(const GlmbDensity& d, const EstimateSet& est_prev,
                                  const EstimateSet& est_now,
                                  const VerificationFeatures& features,
                                  const RecoveryThresholds& thresholds);

}  // namespace glmb
