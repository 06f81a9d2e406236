#include "glmbtrack/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace glmb;

namespace {

ScenarioSpec two_targets(int frames) {
  ScenarioSpec spec;
  spec.frames = frames;
  spec.image_width = 800;
  spec.image_height = 600;
  spec.targets = {
      TargetSpec{40, 80, {{1, 100, 100}, {frames, 100.0 + 4.0 * (frames - 1), 100}}},
      TargetSpec{40, 80, {{1, 100, 400}, {frames, 100.0 + 4.0 * (frames - 1), 400}}},
  };
  return spec;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("generate: noiseless perfect detection equals ground truth") {
  auto spec = two_targets(20);
  spec.p_detect = 1.0;
  spec.clutter_rate = 0.0;
  spec.noise_std = 0.0;
  const auto scenario = generate(spec);
  REQUIRE(scenario.ground_truth.size() == 40);
  REQUIRE(scenario.detections.size() == 20);

  std::size_t gi = 0;
  for (const auto& df : scenario.detections) {
    REQUIRE(df.detections.size() == 2);
    for (const auto& d : df.detections) {
      const auto& gt = scenario.ground_truth[gi++];
      CHECK(gt.frame == df.frame);
      CHECK(d.box.left == doctest::Approx(gt.box.left));
      CHECK(d.box.top == doctest::Approx(gt.box.top));
    }
  }
}

TEST_CASE("generate: occlusion scripts drop detections in their window") {
  auto spec = two_targets(30);
  spec.occlusions = {{1, 10, 5}};
  const auto scenario = generate(spec);
  for (const auto& df : scenario.detections) {
    const std::size_t expected = df.frame >= 10 && df.frame < 15 ? 1 : 2;
    CHECK(df.detections.size() == expected);
  }
  // ground truth keeps the occluded target
  int gt_rows = 0;
  for (const auto& r : scenario.ground_truth) {
    if (r.track_id == 2) ++gt_rows;
  }
  CHECK(gt_rows == 30);
}

TEST_CASE("generate: clutter volume concentrates around the Poisson mean") {
  ScenarioSpec spec;
  spec.frames = 100;
  spec.clutter_rate = 10.0;
  spec.seed = 5;
  const auto scenario = generate(spec);
  int clutter = 0;
  for (const auto& df : scenario.detections) clutter += static_cast<int>(df.detections.size());
  CHECK(clutter >= 800);
  CHECK(clutter <= 1200);
}

TEST_CASE("generate: fixed seed reproduces byte-identical files") {
  auto spec = two_targets(25);
  spec.p_detect = 0.9;
  spec.clutter_rate = 3.0;
  spec.noise_std = 1.5;
  spec.seed = 42;

  const auto dir_a = std::filesystem::temp_directory_path() / "glmbtrack_scn_a";
  const auto dir_b = std::filesystem::temp_directory_path() / "glmbtrack_scn_b";
  write_scenario(generate(spec), dir_a.string());
  write_scenario(generate(spec), dir_b.string());
  for (const char* name : {"gt.txt", "det.txt", "features.txt"}) {
    CHECK(slurp((dir_a / name).string()) == slurp((dir_b / name).string()));
  }
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("generate: the seed moves clutter but not ground truth") {
  auto spec = two_targets(25);
  spec.clutter_rate = 3.0;
  spec.noise_std = 1.0;
  spec.seed = 1;
  const auto a = generate(spec);
  spec.seed = 2;
  const auto b = generate(spec);
  REQUIRE(a.ground_truth.size() == b.ground_truth.size());
  for (std::size_t i = 0; i < a.ground_truth.size(); ++i) {
    CHECK(a.ground_truth[i].box.left == doctest::Approx(b.ground_truth[i].box.left));
  }
  int detections_a = 0, detections_b = 0;
  for (const auto& df : a.detections) detections_a += static_cast<int>(df.detections.size());
  for (const auto& df : b.detections) detections_b += static_cast<int>(df.detections.size());
  CHECK(detections_a != detections_b);  // different dropouts and clutter
}

TEST_CASE("generated files parse back through the detection reader without warnings") {
  auto spec = two_targets(15);
  spec.clutter_rate = 2.0;
  spec.noise_std = 1.0;
  spec.seed = 9;
  const auto dir = std::filesystem::temp_directory_path() / "glmbtrack_scn_c";
  write_scenario(generate(spec), dir.string());

  ParseStats stats;
  const auto frames = parse_detections((dir / "det.txt").string(), 0.0, &stats);
  CHECK(stats.dropped_nonpositive == 0);
  CHECK(!frames.empty());
  const auto gt = parse_results((dir / "gt.txt").string());
  CHECK(gt.size() == 30);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scenario specs round trip through JSON") {
  auto spec = crossing5_spec(7);
  spec.occlusions = {{2, 40, 10}};
  spec.swaps = {{0, 1, 33}};
  const auto text = scenario_to_json(spec);
  const auto back = scenario_from_json_text(text);
  CHECK(back.frames == spec.frames);
  CHECK(back.targets.size() == spec.targets.size());
  CHECK(back.p_detect == doctest::Approx(spec.p_detect));
  CHECK(back.clutter_rate == doctest::Approx(spec.clutter_rate));
  REQUIRE(back.occlusions.size() == 1);
  CHECK(back.occlusions[0].start == 40);
  REQUIRE(back.swaps.size() == 1);
  CHECK(back.swaps[0].frame == 33);
  CHECK(back.targets[1].waypoints.back().cx == doctest::Approx(200.0));
}

TEST_CASE("swap scripts exchange trajectories from the given frame") {
  auto spec = two_targets(10);
  spec.swaps = {{0, 1, 6}};
  const auto scenario = generate(spec);
  // target 1 rows: y = 100 before the swap, 400 after
  for (const auto& r : scenario.ground_truth) {
    if (r.track_id != 1) continue;
    const double cy = r.box.top + r.box.height / 2.0;
    CHECK(cy == doctest::Approx(r.frame < 6 ? 100.0 : 400.0));
  }
}

TEST_CASE("target signatures are pairwise distinct") {
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      CHECK(bhattacharyya(target_histogram(i), target_histogram(j)) == doctest::Approx(1.0));
    }
  }
}
