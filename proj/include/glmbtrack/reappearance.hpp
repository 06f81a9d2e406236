#pragma once

#include "glmbtrack/appearance.hpp"
#include "glmbtrack/birth.hpp"
#include "glmbtrack/estimator.hpp"
#include "glmbtrack/glmb.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace glmb {

/// State of a track at the moment it vanished from the estimate.
struct DisappearedEntry {
  Vec6 state;  // last confirmed estimate (frozen, not propagated)
  TrackLabel label;
  int k0 = 0;  // frame of that estimate
  ColorHistogram histogram;
  Vec2 velocity;
};

struct LookupTable {
  enum class Kind { occluded, miss_detected };

  Kind kind = Kind::occluded;
  int max_age = 60;
  std::vector<DisappearedEntry> entries;

  bool contains(const TrackLabel& l) const;
  void add(DisappearedEntry entry);  // labels unique: replaces an older entry
  void remove(const TrackLabel& l);
  void evict(int current_frame);  // drops entries older than max_age
};

struct ReappearParams {
  double alpha = 0.1;      // per-frame forgetting of the velocity term
  double sigma_v = 2.0;
  double sigma_h = 0.3;
  double r_reappear = 0.5;
  double lambda1 = 0.2;    // direction-aware distance weights
  double lambda2 = 1.0;
  int k_best = 50;
  int max_age = 60;
  double border_margin = 30.0;
  double t_overlapping_ioa = 0.5;
};

/// An unassigned measurement offered to the reappearance filters.
struct ReappearCandidate {
  int meas_index = 0;  // index within the frame's detection list
  Box box;
  ColorHistogram histogram;
};

/// Row-stochastic reappearance weights: rows are table entries, column 0 is
/// the stay-hidden weight 1 - r, columns 1..M are candidate weights scaled
/// so each row sums to 1. The raw score per pair combines an age-discounted
/// velocity-direction term and a color term.
Eigen::MatrixXd reappearance_weights(const LookupTable& table,
                                     const std::vector<ReappearCandidate>& candidates, int frame,
                                     const ReappearParams& params);

struct RecoveredTrack {
  TrackLabel label;
  Vec6 state;
  std::vector<GaussianComponent> mixture;
  int birth_candidate = -1;   // measurement index used as birth location
  int update_candidate = -1;  // measurement index claimed by the update, -1 = miss
};

struct ReappearanceOutcome {
  std::vector<RecoveredTrack> recovered;
  std::vector<ReappearCandidate> still_unassigned;
};

/// One-step filter over a lookup table: every (entry, candidate) pair is a
/// birth candidate weighted by the ranked expansion of the reappearance
/// weights; the birth hypotheses are updated once against the candidate set
/// with no surviving tracks, and MAP extraction decides which labels
/// reappear. Recovered labels leave the table; candidates they consumed are
/// excluded from still_unassigned.
ReappearanceOutcome one_step_reappearance_filter(LookupTable& table,
                                                 const std::vector<ReappearCandidate>& candidates,
                                                 int frame, const ReappearParams& rp,
                                                 const FilterParams& fp, const BirthParams& bp);

struct CategorizeParams {
  double t_overlapping_ioa = 0.5;
  double border_margin = 30.0;
  int image_width = 1920;
  int image_height = 1080;
};

struct CategorizeResult {
  int left_scene = 0;
  int occluded = 0;
  int missed = 0;
  int forced_drops = 0;  // refinements that would have emptied the pool
};

/// Sorts each label present in est_prev but absent from est_now into
/// left-scene / occluded / miss-detected, appends lookup-table entries, and
/// removes the label's hypotheses from the density. Labels in forced_miss
/// (e.g. failed verification) skip the rules and go straight to the
/// miss-detection table. Labels already waiting in a table are skipped. A
/// refinement that would empty the pool instead keeps the best hypothesis
/// with the label dropped.
CategorizeResult categorize_disappeared(
    const EstimateSet& est_prev, const EstimateSet& est_now, GlmbDensity& density,
    LookupTable& lut_occ, LookupTable& lut_miss,
    const std::function<ColorHistogram(const TrackLabel&)>& histogram_of,
    const MotionModel& motion, const CategorizeParams& params,
    const std::vector<TrackLabel>& forced_miss = {});

}  // namespace glmb
