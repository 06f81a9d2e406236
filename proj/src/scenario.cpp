#include "glmbtrack/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace glmb {

namespace {

// Per-frame center positions for every target, with swap scripts applied.
std::vector<std::map<int, std::pair<double, double>>> target_paths(const ScenarioSpec& spec) {
  std::vector<std::map<int, std::pair<double, double>>> paths(spec.targets.size());
  for (std::size_t t = 0; t < spec.targets.size(); ++t) {
    const auto& wps = spec.targets[t].waypoints;
    if (wps.empty()) continue;
    const int first = std::max(1, wps.front().frame);
    const int last = std::min(spec.frames, wps.back().frame);
    for (int f = first; f <= last; ++f) {
      // locate the segment containing f
      std::size_t s = 0;
      while (s + 1 < wps.size() && wps[s + 1].frame < f) ++s;
      if (s + 1 >= wps.size()) {
        paths[t][f] = {wps.back().cx, wps.back().cy};
        continue;
      }
      const auto& a = wps[s];
      const auto& b = wps[s + 1];
      const double u = b.frame == a.frame
                           ? 0.0
                           : static_cast<double>(f - a.frame) / (b.frame - a.frame);
      paths[t][f] = {a.cx + u * (b.cx - a.cx), a.cy + u * (b.cy - a.cy)};
    }
  }
  for (const auto& swap : spec.swaps) {
    auto& pa = paths.at(swap.target_a);
    auto& pb = paths.at(swap.target_b);
    for (int f = swap.frame; f <= spec.frames; ++f) {
      const auto ia = pa.find(f);
      const auto ib = pb.find(f);
      if (ia != pa.end() && ib != pb.end()) std::swap(ia->second, ib->second);
    }
  }
  return paths;
}

}  // namespace

ColorHistogram target_histogram(int target_index) {
  return ColorHistogram::single_bin(37 * (target_index + 1) % ColorHistogram::kSize);
}

MapFeatureProvider GeneratedScenario::provider() const {
  MapFeatureProvider p;
  for (const auto& [key, hist] : features) p.put(key.first, key.second, hist);
  return p;
}

GeneratedScenario generate(const ScenarioSpec& spec) {
  GeneratedScenario out;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::poisson_distribution<int> clutter_count(spec.clutter_rate);

  const auto paths = target_paths(spec);

  auto occluded_at = [&](std::size_t target, int frame) {
    for (const auto& occ : spec.occlusions) {
      if (static_cast<std::size_t>(occ.target) == target && frame >= occ.start &&
          frame < occ.start + occ.duration) {
        return true;
      }
    }
    return false;
  };

  for (int f = 1; f <= spec.frames; ++f) {
    DetectionFrame df;
    df.frame = f;

    for (std::size_t t = 0; t < spec.targets.size(); ++t) {
      const auto pos = paths[t].find(f);
      if (pos == paths[t].end()) continue;
      const auto [cx, cy] = pos->second;
      const Box gt_box =
          Box::from_center(cx, cy, spec.targets[t].width, spec.targets[t].height);
      out.ground_truth.push_back(
          TrackRecord{f, static_cast<int>(t) + 1, gt_box, 1.0});

      const bool detected = unit(rng) < spec.p_detect;
      if (!detected || occluded_at(t, f)) continue;

      Box b = gt_box;
      if (spec.noise_std > 0.0) {
        b = Box::from_center(cx + spec.noise_std * noise(rng), cy + spec.noise_std * noise(rng),
                             std::max(1.0, gt_box.width + spec.noise_std * noise(rng)),
                             std::max(1.0, gt_box.height + spec.noise_std * noise(rng)));
      }
      const int det_index = static_cast<int>(df.detections.size());
      df.detections.push_back({b, 1.0});
      out.features[{f, det_index}] = target_histogram(static_cast<int>(t));
    }

    if (spec.clutter_rate > 0.0) {
      const int n_clutter = clutter_count(rng);
      for (int c = 0; c < n_clutter; ++c) {
        const double cx = unit(rng) * spec.image_width;
        const double cy = unit(rng) * spec.image_height;
        const double w = 20.0 + unit(rng) * 40.0;
        const double h = 40.0 + unit(rng) * 80.0;
        const int det_index = static_cast<int>(df.detections.size());
        df.detections.push_back({Box::from_center(cx, cy, w, h), 1.0});
        ColorHistogram hist;
        for (double& bin : hist.bins) bin = unit(rng);
        hist.normalize();
        out.features[{f, det_index}] = std::move(hist);
      }
    }

    out.detections.push_back(std::move(df));
  }
  return out;
}

void write_scenario(const GeneratedScenario& scenario, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_results(scenario.ground_truth, (dir / "gt.txt").string());

  std::ofstream det((dir / "det.txt").string());
  if (!det) throw std::runtime_error("cannot open " + (dir / "det.txt").string());
  std::array<char, 256> buf{};
  for (const auto& df : scenario.detections) {
    for (const auto& d : df.detections) {
      std::snprintf(buf.data(), buf.size(), "%d,-1,%.2f,%.2f,%.2f,%.2f,%.2f,-1,-1,-1\n",
                    df.frame, d.box.left, d.box.top, d.box.width, d.box.height, d.confidence);
      det << buf.data();
    }
  }
  write_features(scenario.features, (dir / "features.txt").string());
}

ScenarioSpec scenario_from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ScenarioSpec spec;
  spec.frames = j.value("frames", spec.frames);
  spec.image_width = j.value("image_width", spec.image_width);
  spec.image_height = j.value("image_height", spec.image_height);
  spec.p_detect = j.value("p_detect", spec.p_detect);
  spec.clutter_rate = j.value("clutter_rate", spec.clutter_rate);
  spec.noise_std = j.value("noise_std", spec.noise_std);
  spec.seed = j.value("seed", spec.seed);
  for (const auto& jt : j.value("targets", nlohmann::json::array())) {
    TargetSpec t;
    t.width = jt.value("width", t.width);
    t.height = jt.value("height", t.height);
    for (const auto& jw : jt.value("waypoints", nlohmann::json::array())) {
      t.waypoints.push_back(Waypoint{jw.at(0).get<int>(), jw.at(1).get<double>(),
                                     jw.at(2).get<double>()});
    }
    spec.targets.push_back(std::move(t));
  }
  for (const auto& jo : j.value("occlusions", nlohmann::json::array())) {
    spec.occlusions.push_back(
        OcclusionScript{jo.at(0).get<int>(), jo.at(1).get<int>(), jo.at(2).get<int>()});
  }
  for (const auto& js : j.value("swaps", nlohmann::json::array())) {
    spec.swaps.push_back(
        SwapScript{js.at(0).get<int>(), js.at(1).get<int>(), js.at(2).get<int>()});
  }
  return spec;
}

ScenarioSpec scenario_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario spec: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenario_from_json_text(text);
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  nlohmann::json j;
  j["frames"] = spec.frames;
  j["image_width"] = spec.image_width;
  j["image_height"] = spec.image_height;
  j["p_detect"] = spec.p_detect;
  j["clutter_rate"] = spec.clutter_rate;
  j["noise_std"] = spec.noise_std;
  j["seed"] = spec.seed;
  j["targets"] = nlohmann::json::array();
  for (const auto& t : spec.targets) {
    nlohmann::json jt;
    jt["width"] = t.width;
    jt["height"] = t.height;
    jt["waypoints"] = nlohmann::json::array();
    for (const auto& w : t.waypoints) {
      jt["waypoints"].push_back({w.frame, w.cx, w.cy});
    }
    j["targets"].push_back(std::move(jt));
  }
  j["occlusions"] = nlohmann::json::array();
  for (const auto& o : spec.occlusions) {
    j["occlusions"].push_back({o.target, o.start, o.duration});
  }
  j["swaps"] = nlohmann::json::array();
  for (const auto& s : spec.swaps) {
    j["swaps"].push_back({s.target_a, s.target_b, s.frame});
  }
  return j.dump(2);
}

ScenarioSpec crossing5_spec(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.frames = 100;
  spec.image_width = 1920;
  spec.image_height = 1080;
  spec.p_detect = 0.95;
  spec.clutter_rate = 10.0;
  spec.noise_std = 2.0;
  spec.seed = seed;
  // Paths pass each other at staggered times; the tightest crossing is
  // between targets 3 and 4 around mid-sequence.
  spec.targets = {
      TargetSpec{45.0, 95.0, {{1, 200.0, 200.0}, {100, 1700.0, 500.0}}},
      TargetSpec{50.0, 100.0, {{1, 1700.0, 300.0}, {100, 200.0, 600.0}}},
      TargetSpec{40.0, 85.0, {{1, 200.0, 800.0}, {100, 1700.0, 400.0}}},
      TargetSpec{55.0, 110.0, {{1, 960.0, 100.0}, {100, 960.0, 980.0}}},
      TargetSpec{48.0, 92.0, {{1, 1700.0, 900.0}, {100, 200.0, 200.0}}},
  };
  return spec;
}

ScenarioSpec resolve_scenario(const std::string& name_or_path) {
  if (name_or_path == "crossing5") return crossing5_spec();
  return scenario_from_json_file(name_or_path);
}

}  // namespace glmb
