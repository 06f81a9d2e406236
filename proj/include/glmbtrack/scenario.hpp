#pragma once

#include "glmbtrack/appearance.hpp"
#include "glmbtrack/mot_io.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace glmb {

struct Waypoint {
  int frame = 1;
  double cx = 0.0;
  double cy = 0.0;
};

struct TargetSpec {
  double width = 40.0;
  double height = 80.0;
  std::vector<Waypoint> waypoints;  // piecewise-linear path; >= 1 point
};

struct OcclusionScript {
  int target = 0;  // index into targets
  int start = 1;   // first frame without a detection
  int duration = 0;
};

/// Exchanges the two targets' paths from `frame` onward (detector identity
/// confusion between adjacent objects).
struct SwapScript {
  int target_a = 0;
  int target_b = 1;
  int frame = 1;
};

struct ScenarioSpec {
  int frames = 100;
  int image_width = 1920;
  int image_height = 1080;
  std::vector<TargetSpec> targets;
  double p_detect = 1.0;       // per-frame detection probability
  double clutter_rate = 0.0;   // Poisson mean clutter boxes per frame
  double noise_std = 0.0;      // detection box noise, pixels
  std::vector<OcclusionScript> occlusions;
  std::vector<SwapScript> swaps;
  std::uint64_t seed = 0;
};

struct GeneratedScenario {
  std::vector<TrackRecord> ground_truth;
  std::vector<DetectionFrame> detections;
  std::map<std::pair<int, int>, ColorHistogram> features;  // (frame, det_index)

  MapFeatureProvider provider() const;
};

/// Deterministic, distinctive single-bin signature of a ground-truth target.
ColorHistogram target_histogram(int target_index);

/// Constant-velocity-with-waypoints ground truth; detections are noisy
/// copies of the ground-truth boxes, dropped with probability 1 - p_detect
/// and during scripted occlusions; clutter is Poisson over the image with
/// uniform random histograms. Identical spec gives identical output.
GeneratedScenario generate(const ScenarioSpec& spec);

/// Writes gt.txt, det.txt and features.txt under out_dir (created if
/// needed).
void write_scenario(const GeneratedScenario& scenario, const std::string& out_dir);

ScenarioSpec scenario_from_json_file(const std::string& path);
ScenarioSpec scenario_from_json_text(const std::string& text);
std::string scenario_to_json(const ScenarioSpec& spec);

/// Bundled scenario: 5 targets crossing the image over 100 frames with
/// detector dropouts, clutter and box noise.
ScenarioSpec crossing5_spec(std::uint64_t seed = 0);

/// Named bundled specs ("crossing5"); falls back to reading `name` as a
/// JSON file path.
ScenarioSpec resolve_scenario(const std::string& name_or_path);

}  // namespace glmb
