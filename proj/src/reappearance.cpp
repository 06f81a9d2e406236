#include "glmbtrack/reappearance.hpp"

#include "glmbtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace glmb {

bool LookupTable::contains(const TrackLabel& l) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const DisappearedEntry& e) { return e.label == l; });
}

void LookupTable::add(DisappearedEntry entry) {
  remove(entry.label);
  entries.push_back(std::move(entry));
}

void LookupTable::remove(const TrackLabel& l) {
  std::erase_if(entries, [&](const DisappearedEntry& e) { return e.label == l; });
}

void LookupTable::evict(int current_frame) {
  std::erase_if(entries,
                [&](const DisappearedEntry& e) { return current_frame - e.k0 > max_age; });
}

Eigen::MatrixXd reappearance_weights(const LookupTable& table,
                                     const std::vector<ReappearCandidate>& candidates, int frame,
                                     const ReappearParams& params) {
  const int rows = static_cast<int>(table.entries.size());
  const int m = static_cast<int>(candidates.size());
  Eigen::MatrixXd w(rows, m + 1);

  for (int i = 0; i < rows; ++i) {
    const DisappearedEntry& e = table.entries[i];
    const double elapsed = std::max(1, frame - e.k0);
    const double forget = std::exp(-params.alpha * elapsed);
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      // Observable proxy for the hidden motion: displacement from the entry
      // to the candidate divided by the elapsed frames.
      const Vec2 v_avg((candidates[j].box.cx() - e.state(state::kPx)) / elapsed,
                       (candidates[j].box.cy() - e.state(state::kPy)) / elapsed);
      const double d_da =
          direction_aware_distance(e.velocity, v_avg, params.lambda1, params.lambda2);
      const double motion =
          forget * std::exp(-d_da * d_da / (2.0 * params.sigma_v * params.sigma_v));

      double d_b = 0.0;  // degraded appearance mode leaves color uninformative
      if (!e.histogram.is_sentinel() && !candidates[j].histogram.is_sentinel()) {
        d_b = bhattacharyya(candidates[j].histogram, e.histogram);
      }
      const double color = std::exp(-d_b * d_b / (2.0 * params.sigma_h * params.sigma_h));

      w(i, j + 1) = motion + color;
      total += w(i, j + 1);
    }
    // Row scaling: candidate weights share r, the stay-hidden weight is 1-r.
    w(i, 0) = 1.0 - params.r_reappear;
    if (m > 0 && total > 0.0) {
      for (int j = 0; j < m; ++j) w(i, j + 1) *= params.r_reappear / total;
    }
  }
  return w;
}

ReappearanceOutcome one_step_reappearance_filter(LookupTable& table,
                                                 const std::vector<ReappearCandidate>& candidates,
                                                 int frame, const ReappearParams& rp,
                                                 const FilterParams& fp, const BirthParams& bp) {
  ReappearanceOutcome out;
  out.still_unassigned = candidates;
  if (table.entries.empty() || candidates.empty()) return out;

  const Eigen::MatrixXd w = reappearance_weights(table, candidates, frame, rp);
  const int rows = static_cast<int>(table.entries.size());
  const int m = static_cast<int>(candidates.size());

  // Ranked expansion of the birth weights: measurement columns then one
  // stay-hidden column per entry.
  CostMatrix cost(rows, m + rows);
  cost.setConstant(kForbidden);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < m; ++j) {
      if (w(i, j + 1) > 0.0) cost(i, j) = -std::log(w(i, j + 1));
    }
    cost(i, m + i) = -std::log(w(i, 0));
  }

  // Each ranked assignment is one birth hypothesis (I, v): entries assigned
  // to a candidate are born at that candidate's box with the displacement
  // velocity. The candidate index is recorded as the first history entry so
  // it survives the update.
  GlmbDensity birth_pool;
  birth_pool.frame = frame;
  for (const Assignment& a : murty_k_best(cost, rp.k_best)) {
    GlmbHypothesis hyp;
    hyp.weight = std::exp(-a.cost);
    for (int i = 0; i < rows; ++i) {
      if (a.row_to_col[i] >= m) continue;  // stayed hidden
      const DisappearedEntry& e = table.entries[i];
      const int j = a.row_to_col[i];
      const double elapsed = std::max(1, frame - e.k0);

      LabeledGaussianTrack t;
      t.label = e.label;
      GaussianComponent prior;
      prior.weight = 1.0;
      prior.mean << candidates[j].box.cx(), candidates[j].box.cy(),
          (candidates[j].box.cx() - e.state(state::kPx)) / elapsed,
          (candidates[j].box.cy() - e.state(state::kPy)) / elapsed, candidates[j].box.width,
          candidates[j].box.height;
      prior.covariance = bp.prior_cov_diag.asDiagonal();
      t.mixture = {prior};

      hyp.labels.push_back(e.label);
      hyp.assoc_history[e.label] = {j + 1};
      hyp.tracks.emplace(e.label, std::move(t));
    }
    std::sort(hyp.labels.begin(), hyp.labels.end());
    birth_pool.hypotheses.push_back(std::move(hyp));
  }
  birth_pool.normalize();

  // Single no-survivor update against the same candidate set.
  DetectionFrame z;
  z.frame = frame;
  for (const auto& c : candidates) z.detections.push_back({c.box, 1.0});
  FilterParams one_step = fp;
  one_step.k_update = rp.k_best;
  one_step.max_hypotheses = std::max(fp.max_hypotheses, rp.k_best * rp.k_best);
  one_step.min_hyp_weight = 0.0;
  const UpdateResult updated = update(birth_pool, z, one_step);

  const GlmbHypothesis& chosen = updated.density.hypotheses[updated.best_hypothesis];
  std::set<int> consumed;  // candidate-list indices
  for (const auto& l : chosen.labels) {
    const auto& history = chosen.assoc_history.at(l);  // {birth candidate + 1, update assoc}
    const int birth_local = history.front() - 1;
    const int update_local = history.back() >= 1 ? history.back() - 1 : -1;
    consumed.insert(birth_local);
    if (update_local >= 0) consumed.insert(update_local);

    RecoveredTrack rec;
    rec.label = l;
    rec.mixture = chosen.tracks.at(l).mixture;
    rec.state = mixture_mean(rec.mixture);
    // report measurement indices of the enclosing frame, not candidate slots
    rec.birth_candidate = candidates[birth_local].meas_index;
    rec.update_candidate = update_local >= 0 ? candidates[update_local].meas_index : -1;
    table.remove(l);
    out.recovered.push_back(std::move(rec));
  }

  if (!consumed.empty()) {
    std::vector<ReappearCandidate> rest;
    for (int j = 0; j < m; ++j) {
      if (!consumed.count(j)) rest.push_back(candidates[j]);
    }
    out.still_unassigned = std::move(rest);
  }
  return out;
}

namespace {

bool heading_out(const Vec6& x, double margin, int width, int height) {
  const double cx = x(state::kPx);
  const double cy = x(state::kPy);
  const double vx = x(state::kVx);
  const double vy = x(state::kVy);
  if (cx <= margin && vx < 0.0) return true;
  if (cx >= width - margin && vx > 0.0) return true;
  if (cy <= margin && vy < 0.0) return true;
  if (cy >= height - margin && vy > 0.0) return true;
  return false;
}

// Refinement with the pool-exhaustion fallback: keep the best hypothesis
// with the label force-dropped.
bool refine_label(GlmbDensity& density, const TrackLabel& label) {
  try {
    density = remove_hypotheses_with_label(density, label);
    return false;
  } catch (const PoolExhausted&) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(density.hypotheses.size()); ++i) {
      if (density.hypotheses[i].weight > density.hypotheses[best].weight) best = i;
    }
    GlmbHypothesis keep = density.hypotheses[best];
    std::erase(keep.labels, label);
    keep.tracks.erase(label);
    keep.assoc_history.erase(label);
    keep.weight = 1.0;
    density.hypotheses = {std::move(keep)};
    return true;
  }
}

}  // namespace

CategorizeResult categorize_disappeared(
    const EstimateSet& est_prev, const EstimateSet& est_now, GlmbDensity& density,
    LookupTable& lut_occ, LookupTable& lut_miss,
    const std::function<ColorHistogram(const TrackLabel&)>& histogram_of,
    const MotionModel& motion, const CategorizeParams& params,
    const std::vector<TrackLabel>& forced_miss) {
  CategorizeResult res;

  for (const auto& [label, x] : est_prev.objects) {
    if (est_now.has(label)) continue;
    if (lut_occ.contains(label) || lut_miss.contains(label)) continue;

    const bool forced = std::find(forced_miss.begin(), forced_miss.end(), label) !=
                        forced_miss.end();

    if (!forced &&
        heading_out(x, params.border_margin, params.image_width, params.image_height)) {
      res.forced_drops += refine_label(density, label) ? 1 : 0;
      ++res.left_scene;
      continue;
    }

    bool occluded = false;
    if (!forced) {
      const Vec6 xp = motion.F * x;
      const Box pred = box_from_state(xp);
      for (const auto& [other, xo] : est_now.objects) {
        if (ioa(pred, box_from_state(xo)) > params.t_overlapping_ioa) {
          occluded = true;
          break;
        }
      }
    }

    DisappearedEntry entry;
    entry.state = x;
    entry.label = label;
    entry.k0 = est_prev.frame;
    entry.histogram = histogram_of(label);
    entry.velocity = Vec2(x(state::kVx), x(state::kVy));

    if (occluded) {
      lut_occ.add(std::move(entry));
      ++res.occluded;
    } else {
      lut_miss.add(std::move(entry));
      ++res.missed;
    }
    res.forced_drops += refine_label(density, label) ? 1 : 0;
  }
  return res;
}

}  // namespace glmb
