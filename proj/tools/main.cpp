#include "glmbtrack/config.hpp"
#include "glmbtrack/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

glmb::RunConfig build_config(const std::string& config_path,
                             const std::vector<std::string>& overrides) {
  glmb::RunConfig cfg = glmb::default_config();
  if (!config_path.empty()) {
    cfg = glmb::load_config(config_path, cfg);
  }
  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects section.key=value, got '" + kv + "'");
    }
    glmb::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Labeled multi-Bernoulli multi-object tracker"};
  app.require_subcommand(0, 1);

  bool dump_defaults = false;
  app.add_flag("--dump-default-config", dump_defaults,
               "Print the full default configuration and exit");

  std::string config_path;
  std::vector<std::string> overrides;

  auto* track = app.add_subcommand("track", "Run the tracker over a detection file");
  std::string det_path, img_root, features_path, out_path;
  track->add_option("--det", det_path, "MOTChallenge detection file")->required();
  track->add_option("--img", img_root, "Sequence root or image directory (images mode)");
  track->add_option("--features", features_path, "Precomputed feature file");
  track->add_option("--out", out_path, "Results file to write")->required();
  track->add_option("--config", config_path, "Config file");
  track->add_option("--set", overrides, "Override: section.key=value")->take_all();

  auto* eval = app.add_subcommand("eval", "CLEAR-MOT evaluation of a results file");
  std::string gt_path, hyp_path, csv_path;
  double iou_thresh = 0.5;
  eval->add_option("--gt", gt_path, "Ground-truth file")->required();
  eval->add_option("--hyp", hyp_path, "Hypothesis (results) file")->required();
  eval->add_option("--iou-thresh", iou_thresh, "Match threshold (default 0.5)");
  eval->add_option("--out", csv_path, "CSV report path");

  auto* gen = app.add_subcommand("generate", "Generate a synthetic scenario");
  std::string spec_name, gen_out;
  std::uint64_t seed = 0;
  gen->add_option("--spec", spec_name, "Bundled name (crossing5) or JSON spec path")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dump_defaults) {
      std::cout << glmb::dump_config(glmb::default_config());
      return 0;
    }
    if (track->parsed()) {
      glmb::RunConfig cfg = build_config(config_path, overrides);
      if (!features_path.empty() && cfg.feature_mode == glmb::FeatureMode::none) {
        cfg.feature_mode = glmb::FeatureMode::features;
      }
      if (!img_root.empty() && features_path.empty()) {
        cfg.feature_mode = glmb::FeatureMode::images;
      }
      const std::string feature_root =
          cfg.feature_mode == glmb::FeatureMode::images ? img_root : features_path;
      const auto summary = glmb::run_track(cfg, det_path, feature_root, out_path);
      std::cout << "frames=" << summary.frames << " records=" << summary.records
                << " out=" << out_path << "\n";
      return 0;
    }
    if (eval->parsed()) {
      glmb::run_eval(gt_path, hyp_path, iou_thresh, std::cout, csv_path);
      return 0;
    }
    if (gen->parsed()) {
      glmb::run_generate(spec_name, gen_out, seed);
      std::cout << "scenario written to " << gen_out << "\n";
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
