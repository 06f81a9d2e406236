#include "glmbtrack/pipeline.hpp"

#include "glmbtrack/birth.hpp"
#include "glmbtrack/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace glmb {

namespace {

// Verification against the per-label reference store. The current appearance
// of a label under a hypothesis is the histogram of the measurement it
// associated this frame; coasting labels cannot be verified.
class StoreVerification : public VerificationFeatures {
 public:
  StoreVerification(const std::map<TrackLabel, AppearanceDescriptor>& refs,
                    const DetectionFrame& z,
                    const std::function<ColorHistogram(int)>& histogram_of_meas)
      : refs_(refs), z_(z), histogram_of_meas_(histogram_of_meas) {}

  std::optional<double> color_similarity(const TrackLabel& label,
                                         const GlmbHypothesis& h) const override {
    const auto ref = refs_.find(label);
    if (ref == refs_.end()) return std::nullopt;
    const auto hist = h.assoc_history.find(label);
    if (hist == h.assoc_history.end() || hist->second.empty()) return std::nullopt;
    const int assoc = hist->second.back();
    if (assoc < 1) return std::nullopt;  // coasted: nothing fresh to compare
    const int j = assoc - 1;
    AppearanceDescriptor now;
    now.histogram = histogram_of_meas_(j);
    now.box_w = z_.detections[j].box.width;
    now.box_h = z_.detections[j].box.height;
    return same_color(now, ref->second);
  }

  std::optional<std::pair<double, double>> reference_size(const TrackLabel& label) const override {
    const auto ref = refs_.find(label);
    if (ref == refs_.end()) return std::nullopt;
    return std::make_pair(ref->second.box_w, ref->second.box_h);
  }

 private:
  const std::map<TrackLabel, AppearanceDescriptor>& refs_;
  const DetectionFrame& z_;
  std::function<ColorHistogram(int)> histogram_of_meas_;
};

}  // namespace

std::string TrackerFrameLog::to_line() const {
  std::ostringstream out;
  out << "frame=" << frame << " measurements=" << measurements << " hypotheses=" << hypotheses
      << " estimated=" << estimated << " unassigned=" << unassigned << " lut_occ=" << lut_occ
      << " lut_miss=" << lut_miss << " recovered=" << recovered << " left_scene=" << left_scene
      << " categorized_occ=" << categorized_occ << " categorized_miss=" << categorized_miss
      << " idsw_removed=" << idsw_removed << " unverified=" << unverified;
  return out.str();
}

Tracker::Tracker(const RunConfig& cfg, FeatureProvider* features)
    : cfg_(cfg), features_(features) {
  cfg_.finalize();
  lut_occ_.kind = LookupTable::Kind::occluded;
  lut_miss_.kind = LookupTable::Kind::miss_detected;
  lut_occ_.max_age = cfg_.reappear.max_age;
  lut_miss_.max_age = cfg_.reappear.max_age;
  est_prev_.frame = 0;
}

ColorHistogram Tracker::histogram_at(int frame, int det_index, const Box& box) {
  if (!features_) return ColorHistogram();
  return features_->histogram(frame, det_index, box);
}

Tracker::FrameResult Tracker::step(const DetectionFrame& z) {
  const int k = density_.frame + 1;
  if (z.frame != k) {
    throw std::invalid_argument("Tracker::step: expected frame " + std::to_string(k) + ", got " +
                                std::to_string(z.frame));
  }
  FrameResult result;
  result.log.frame = z.frame;
  result.log.measurements = static_cast<int>(z.detections.size());

  // Per-frame histogram cache for the current measurement set.
  std::map<int, ColorHistogram> meas_hist;
  auto histogram_of_meas = [&](int j) {
    auto it = meas_hist.find(j);
    if (it == meas_hist.end()) {
      it = meas_hist.emplace(j, histogram_at(z.frame, j, z.detections[j].box)).first;
    }
    return it->second;
  };

  // Two-frame adaptive birth from the previous frame's leftover measurements.
  const auto birth_points = propose_birth_points(unassigned_prev_, z, density_.frame,
                                                 cfg_.birth.t_overlapping, cfg_.birth.r_birth);
  const BirthDensity birth =
      build_birth_density(birth_points, z, cfg_.birth, cfg_.filter.motion.dt);

  density_ = predict(density_, birth, cfg_.filter);
  UpdateResult updated = update(density_, z, cfg_.filter);
  density_ = std::move(updated.density);

  EstimateSet est_now =
      extract_states(density_.hypotheses[updated.best_hypothesis], k, updated.best_hypothesis);

  // Label verification by size and color; may switch to another hypothesis.
  std::vector<TrackLabel> unverified;
  if (cfg_.id_switch_recovery) {
    std::map<TrackLabel, AppearanceDescriptor> refs;
    for (const auto& [label, ref] : store_) refs.emplace(label, ref.descriptor);
    StoreVerification features(refs, z, histogram_of_meas);
    RecoveryResult rec = id_switch_recovery(density_, est_prev_, est_now, features, cfg_.recovery);
    density_ = std::move(rec.density);
    est_now = std::move(rec.estimate);
    unverified = std::move(rec.unverified);
    result.log.idsw_removed = rec.removed_hypotheses;
    result.log.unverified = static_cast<int>(unverified.size());
  }

  // Associations of the finally chosen hypothesis, before any refinement
  // invalidates hypothesis indices.
  std::map<TrackLabel, int> assoc_now;
  {
    const GlmbHypothesis& chosen = density_.hypotheses[est_now.source_hypothesis];
    for (const auto& l : chosen.labels) {
      const auto& history = chosen.assoc_history.at(l);
      assoc_now[l] = history.empty() ? 0 : history.back();
    }
    std::vector<int> unassigned =
        unassigned_measurements(chosen, static_cast<int>(z.detections.size()));
    result.log.unassigned = static_cast<int>(unassigned.size());

    // Candidates for the reappearance filters, with appearance attached.
    std::vector<ReappearCandidate> candidates;
    candidates.reserve(unassigned.size());
    for (int j : unassigned) {
      candidates.push_back(ReappearCandidate{j, z.detections[j].box, histogram_of_meas(j)});
    }

    // Left-scene / occluded / miss-detected categorization; labels that
    // failed verification are forced into the miss-detection table.
    CategorizeParams cat;
    cat.t_overlapping_ioa = cfg_.reappear.t_overlapping_ioa;
    cat.border_margin = cfg_.reappear.border_margin;
    cat.image_width = cfg_.image_width;
    cat.image_height = cfg_.image_height;
    auto histogram_of_label = [&](const TrackLabel& label) {
      auto it = store_.find(label);
      return it != store_.end() ? it->second.descriptor.histogram : ColorHistogram();
    };
    const CategorizeResult cats =
        categorize_disappeared(est_prev_, est_now, density_, lut_occ_, lut_miss_,
                               histogram_of_label, cfg_.filter.motion, cat, unverified);
    result.log.left_scene = cats.left_scene;
    result.log.categorized_occ = cats.occluded;
    result.log.categorized_miss = cats.missed;

    lut_occ_.evict(k);
    lut_miss_.evict(k);

    // One-step reappearance filters: occlusion first, then miss-detection on
    // whatever measurements remain.
    auto occ_out = one_step_reappearance_filter(lut_occ_, candidates, k, cfg_.reappear,
                                                cfg_.filter, cfg_.birth);
    auto miss_out = one_step_reappearance_filter(lut_miss_, occ_out.still_unassigned, k,
                                                 cfg_.reappear, cfg_.filter, cfg_.birth);

    std::vector<RecoveredTrack> recovered = std::move(occ_out.recovered);
    for (auto& r : miss_out.recovered) recovered.push_back(std::move(r));
    result.log.recovered = static_cast<int>(recovered.size());

    // Candidate indices consumed by recoveries must not seed births next
    // frame.
    unassigned_prev_.clear();
    for (const auto& c : miss_out.still_unassigned) unassigned_prev_.push_back(c.box);

    // Recovered tracks re-enter the filter as confirmed tracks in every
    // hypothesis and join the estimate.
    for (const RecoveredTrack& rec : recovered) {
      const int meas = rec.update_candidate >= 0 ? rec.update_candidate : rec.birth_candidate;
      for (auto& hyp : density_.hypotheses) {
        if (hyp.contains(rec.label)) continue;
        hyp.labels.insert(
            std::upper_bound(hyp.labels.begin(), hyp.labels.end(), rec.label), rec.label);
        LabeledGaussianTrack t;
        t.label = rec.label;
        t.mixture = rec.mixture;
        t.last_update = k;
        hyp.tracks.emplace(rec.label, std::move(t));
        hyp.assoc_history[rec.label] = {meas + 1};
      }
      Vec6 x = rec.state;
      x(state::kW) = std::max(x(state::kW), 1e-3);
      x(state::kH) = std::max(x(state::kH), 1e-3);
      est_now.objects.emplace_back(rec.label, x);
      assoc_now[rec.label] = meas + 1;
    }
    std::sort(est_now.objects.begin(), est_now.objects.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  // Reference appearance store: refresh for every label confirmed by a
  // measurement this frame, and pass the descriptor along to the label's
  // tracks in the pool.
  for (const auto& [label, x] : est_now.objects) {
    const auto it = assoc_now.find(label);
    if (it == assoc_now.end() || it->second < 1) continue;
    const int j = it->second - 1;
    Reference ref;
    ref.descriptor.histogram = histogram_of_meas(j);
    ref.descriptor.box_w = z.detections[j].box.width;
    ref.descriptor.box_h = z.detections[j].box.height;
    ref.frame = k;
    auto shared = std::make_shared<const AppearanceDescriptor>(ref.descriptor);
    for (auto& hyp : density_.hypotheses) {
      const auto track = hyp.tracks.find(label);
      if (track != hyp.tracks.end()) track->second.appearance = shared;
    }
    store_[label] = std::move(ref);
  }

  // Emit records with stable integer ids assigned at first appearance.
  for (const auto& [label, x] : est_now.objects) {
    auto [it, fresh] = label_ids_.try_emplace(label, next_id_);
    if (fresh) ++next_id_;
    result.records.push_back(TrackRecord{z.frame, it->second, box_from_state(x), 1.0});
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const TrackRecord& a, const TrackRecord& b) { return a.track_id < b.track_id; });

  result.log.hypotheses = static_cast<int>(density_.hypotheses.size());
  result.log.estimated = static_cast<int>(est_now.objects.size());
  result.log.lut_occ = static_cast<int>(lut_occ_.entries.size());
  result.log.lut_miss = static_cast<int>(lut_miss_.entries.size());

  est_prev_ = est_now;
  result.estimate = std::move(est_now);
  return result;
}

RunSummary run_track(const RunConfig& cfg, const std::string& det_path,
                     const std::string& feature_root, const std::string& out_path) {
  RunSummary summary;
  const auto frames =
      parse_detections(det_path, cfg.confidence_threshold, &summary.parse_stats);

  std::unique_ptr<FeatureProvider> provider;
  if (cfg.feature_mode != FeatureMode::none) {
    provider = frame_provider(cfg.feature_mode, feature_root);
  }

  std::ofstream log(out_path + ".log");
  if (summary.parse_stats.dropped_nonpositive > 0) {
    log << "warning dropped_nonpositive=" << summary.parse_stats.dropped_nonpositive << "\n";
  }

  Tracker tracker(cfg, provider.get());
  std::vector<TrackRecord> records;

  int max_frame = 0;
  for (const auto& f : frames) max_frame = std::max(max_frame, f.frame);
  std::map<int, const DetectionFrame*> by_frame;
  for (const auto& f : frames) by_frame[f.frame] = &f;

  for (int frame = 1; frame <= max_frame; ++frame) {
    DetectionFrame empty;
    empty.frame = frame;
    const auto it = by_frame.find(frame);
    const DetectionFrame& z = it != by_frame.end() ? *it->second : empty;
    auto res = tracker.step(z);
    records.insert(records.end(), res.records.begin(), res.records.end());
    log << res.log.to_line() << "\n";
    ++summary.frames;
  }

  write_results(records, out_path);
  summary.records = static_cast<int>(records.size());
  return summary;
}

EvalReport run_eval(const std::string& gt_path, const std::string& hyp_path, double iou_thresh,
                    std::ostream& out, const std::string& csv_path) {
  const auto gt = parse_results(gt_path);
  const auto hyp = parse_results(hyp_path);
  EvalReport report = evaluate(gt, hyp, iou_thresh);
  out << report.table();
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open csv output: " + csv_path);
    csv << report.csv();
  }
  return report;
}

void run_generate(const std::string& spec_name_or_path, const std::string& out_dir,
                  std::uint64_t seed) {
  ScenarioSpec spec = resolve_scenario(spec_name_or_path);
  spec.seed = seed;
  const GeneratedScenario scenario = generate(spec);
  write_scenario(scenario, out_dir);
}

}  // namespace glmb
