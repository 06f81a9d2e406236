#pragma once

#include "glmbtrack/birth.hpp"
#include "glmbtrack/estimator.hpp"
#include "glmbtrack/glmb.hpp"
#include "glmbtrack/mot_io.hpp"
#include "glmbtrack/reappearance.hpp"

#include <cstdint>
#include <limits>
#include <string>

namespace glmb {

/// Every tunable in one place. Matrix-valued model parameters are derived
/// from the scalar sigmas by finalize().
struct RunConfig {
  FilterParams filter;

  // [motion] / [measurement]
  double motion_dt = 1.0;
  double sigma_pos = 5.0;
  double sigma_vel = 2.0;
  double sigma_size = 3.0;
  double sigma_meas = 10.0;

  // [birth]
  BirthParams birth;
  double birth_sigma_pos = 20.0;
  double birth_sigma_vel = 10.0;
  double birth_sigma_size = 10.0;

  // [estimator]
  RecoveryThresholds recovery;
  bool id_switch_recovery = true;

  // [reappearance] (+ [appearance] lambda weights)
  ReappearParams reappear;

  // [io]
  // keep-all default: detector scores (e.g. ACF) may be negative
  double confidence_threshold = -std::numeric_limits<double>::infinity();
  FeatureMode feature_mode = FeatureMode::none;

  // [run]
  int image_width = 1920;
  int image_height = 1080;
  double eval_iou_thresh = 0.5;
  std::uint64_t seed = 0;

  /// Rebuilds filter.motion, filter.measurement and birth.prior_cov_diag
  /// from the scalar fields. Call after mutating sigmas.
  void finalize();
};

RunConfig default_config();

/// Parses "[section]\nkey = value" text over a base config. Unknown
/// sections or keys and out-of-range values raise std::runtime_error.
RunConfig parse_config_text(const std::string& text, RunConfig base);

RunConfig load_config(const std::string& path, RunConfig base);

/// Applies one "section.key=value" override.
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Full config in the file format, every key present.
std::string dump_config(const RunConfig& cfg);

}  // namespace glmb
