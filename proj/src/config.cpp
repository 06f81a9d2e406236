#include "glmbtrack/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace glmb {

namespace {

struct Key {
  std::string name;  // "section.key"
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

double parse_double(const std::string& raw, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad numeric value for " + key + ": '" + raw + "'");
  }
  if (used != raw.size()) {
    throw std::runtime_error("config: bad numeric value for " + key + ": '" + raw + "'");
  }
  return v;
}

std::string fmt(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.10g", v);
  return buf.data();
}

template <typename T>
Key number_key(std::string name, T RunConfig::* field, double lo, double hi) {
  return Key{
      name,
      [name, field, lo, hi](RunConfig& c, const std::string& raw) {
        const double v = parse_double(raw, name);
        if (v < lo || v > hi) {
          throw std::runtime_error("config: " + name + " out of range [" + fmt(lo) + ", " +
                                   fmt(hi) + "]: " + raw);
        }
        c.*field = static_cast<T>(v);
      },
      [field](const RunConfig& c) { return fmt(static_cast<double>(c.*field)); }};
}

template <typename Sub, typename T>
Key nested_key(std::string name, Sub RunConfig::* sub, T Sub::* field, double lo, double hi) {
  return Key{
      name,
      [name, sub, field, lo, hi](RunConfig& c, const std::string& raw) {
        const double v = parse_double(raw, name);
        if (v < lo || v > hi) {
          throw std::runtime_error("config: " + name + " out of range [" + fmt(lo) + ", " +
                                   fmt(hi) + "]: " + raw);
        }
        (c.*sub).*field = static_cast<T>(v);
      },
      [sub, field](const RunConfig& c) { return fmt(static_cast<double>((c.*sub).*field)); }};
}

Key bool_key(std::string name, bool RunConfig::* field) {
  return Key{name,
             [name, field](RunConfig& c, const std::string& raw) {
               if (raw == "true" || raw == "1") {
                 c.*field = true;
               } else if (raw == "false" || raw == "0") {
                 c.*field = false;
               } else {
                 throw std::runtime_error("config: " + name + " expects true/false: " + raw);
               }
             },
             [field](const RunConfig& c) { return (c.*field) ? "true" : "false"; }};
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr double eps = 1e-12;

    k.push_back(nested_key("filter.p_detect", &RunConfig::filter, &FilterParams::p_detect, eps,
                           1.0 - eps));
    k.push_back(nested_key("filter.p_survive", &RunConfig::filter, &FilterParams::p_survive, eps,
                           1.0));
    k.push_back(nested_key("filter.clutter_intensity", &RunConfig::filter,
                           &FilterParams::clutter_intensity, 0.0, inf));
    k.push_back(nested_key("filter.max_hypotheses", &RunConfig::filter,
                           &FilterParams::max_hypotheses, 1, 1e9));
    k.push_back(nested_key("filter.min_hyp_weight", &RunConfig::filter,
                           &FilterParams::min_hyp_weight, 0.0, 1.0));
    k.push_back(
        nested_key("filter.k_predict", &RunConfig::filter, &FilterParams::k_predict, 1, 1e9));
    k.push_back(
        nested_key("filter.k_update", &RunConfig::filter, &FilterParams::k_update, 1, 1e9));
    k.push_back(nested_key("filter.gate_mahalanobis", &RunConfig::filter,
                           &FilterParams::gate_mahalanobis, 0.0, inf));
    k.push_back(nested_key("filter.mixture_prune_thresh", &RunConfig::filter,
                           &FilterParams::mixture_prune_thresh, 0.0, 1.0));
    k.push_back(nested_key("filter.mixture_merge_dist", &RunConfig::filter,
                           &FilterParams::mixture_merge_dist, 0.0, inf));
    k.push_back(nested_key("filter.mixture_max_components", &RunConfig::filter,
                           &FilterParams::mixture_max_components, 1, 1e6));

    k.push_back(number_key("motion.dt", &RunConfig::motion_dt, eps, 1e3));
    k.push_back(number_key("motion.sigma_pos", &RunConfig::sigma_pos, 0.0, inf));
    k.push_back(number_key("motion.sigma_vel", &RunConfig::sigma_vel, 0.0, inf));
    k.push_back(number_key("motion.sigma_size", &RunConfig::sigma_size, 0.0, inf));
    k.push_back(number_key("measurement.sigma_meas", &RunConfig::sigma_meas, eps, inf));

    k.push_back(nested_key("birth.t_overlapping", &RunConfig::birth, &BirthParams::t_overlapping,
                           0.0, 1.0));
    k.push_back(
        nested_key("birth.r_birth", &RunConfig::birth, &BirthParams::r_birth, eps, 1.0 - eps));
    k.push_back(number_key("birth.sigma_pos", &RunConfig::birth_sigma_pos, eps, inf));
    k.push_back(number_key("birth.sigma_vel", &RunConfig::birth_sigma_vel, eps, inf));
    k.push_back(number_key("birth.sigma_size", &RunConfig::birth_sigma_size, eps, inf));

    k.push_back(nested_key("appearance.lambda1", &RunConfig::reappear, &ReappearParams::lambda1,
                           0.0, inf));
    k.push_back(nested_key("appearance.lambda2", &RunConfig::reappear, &ReappearParams::lambda2,
                           0.0, inf));

    k.push_back(nested_key("estimator.t_size", &RunConfig::recovery, &RecoveryThresholds::t_size,
                           0.0, 1.0));
    k.push_back(nested_key("estimator.t_color", &RunConfig::recovery,
                           &RecoveryThresholds::t_color, 0.0, 1.0));
    k.push_back(nested_key("estimator.t_weight", &RunConfig::recovery,
                           &RecoveryThresholds::t_weight, 0.0, 1.0));
    k.push_back(bool_key("estimator.id_switch_recovery", &RunConfig::id_switch_recovery));

    k.push_back(
        nested_key("reappearance.alpha", &RunConfig::reappear, &ReappearParams::alpha, 0.0, inf));
    k.push_back(nested_key("reappearance.sigma_v", &RunConfig::reappear, &ReappearParams::sigma_v,
                           eps, inf));
    k.push_back(nested_key("reappearance.sigma_h", &RunConfig::reappear, &ReappearParams::sigma_h,
                           eps, inf));
    k.push_back(nested_key("reappearance.r_reappear", &RunConfig::reappear,
                           &ReappearParams::r_reappear, eps, 1.0 - eps));
    k.push_back(
        nested_key("reappearance.k_best", &RunConfig::reappear, &ReappearParams::k_best, 1, 1e6));
    k.push_back(nested_key("reappearance.max_age", &RunConfig::reappear, &ReappearParams::max_age,
                           0, 1e9));
    k.push_back(nested_key("reappearance.border_margin", &RunConfig::reappear,
                           &ReappearParams::border_margin, 0.0, inf));
    k.push_back(nested_key("reappearance.t_overlapping_ioa", &RunConfig::reappear,
                           &ReappearParams::t_overlapping_ioa, 0.0, 1.0));

    k.push_back(
        number_key("io.confidence_threshold", &RunConfig::confidence_threshold, -inf, inf));
    k.push_back(Key{"io.feature_mode",
                    [](RunConfig& c, const std::string& raw) {
                      c.feature_mode = feature_mode_from_string(raw);
                    },
                    [](const RunConfig& c) { return to_string(c.feature_mode); }});

    k.push_back(number_key("run.image_width", &RunConfig::image_width, 1, 1e9));
    k.push_back(number_key("run.image_height", &RunConfig::image_height, 1, 1e9));
    k.push_back(number_key("run.eval_iou_thresh", &RunConfig::eval_iou_thresh, 0.0, 1.0));
    k.push_back(number_key("run.seed", &RunConfig::seed, 0, 1.8e19));
    return k;
  }();
  return keys;
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

void RunConfig::finalize() {
  filter.motion = MotionModel::constant_velocity(
      motion_dt, (Vec6() << sigma_pos * sigma_pos, sigma_pos * sigma_pos, sigma_vel * sigma_vel,
                  sigma_vel * sigma_vel, sigma_size * sigma_size, sigma_size * sigma_size)
                     .finished());
  filter.measurement = MeasurementModel::position_size(
      Vec4::Constant(sigma_meas * sigma_meas));
  birth.prior_cov_diag << birth_sigma_pos * birth_sigma_pos, birth_sigma_pos * birth_sigma_pos,
      birth_sigma_vel * birth_sigma_vel, birth_sigma_vel * birth_sigma_vel,
      birth_sigma_size * birth_sigma_size, birth_sigma_size * birth_sigma_size;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.finalize();
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  for (const Key& k : key_table()) {
    if (k.name == dotted_key) {
      k.set(cfg, trim(value));
      cfg.finalize();
      return;
    }
  }
  throw std::runtime_error("config: unknown key '" + dotted_key + "'");
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw std::runtime_error("config line " + std::to_string(line_no) + ": bad section");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (section.empty()) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": key outside a [section]");
    }
    apply_override(base, section + "." + key, value);
  }
  base.finalize();
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text, std::move(base));
}

std::string dump_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const Key& k : key_table()) {
    const std::size_t dot = k.name.find('.');
    const std::string sec = k.name.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += k.name.substr(dot + 1) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace glmb
