#include "glmbtrack/estimator.hpp"

#include "glmbtrack/appearance.hpp"

#include <algorithm>
#include <stdexcept>

namespace glmb {

bool EstimateSet::has(const TrackLabel& l) const { return state_of(l) != nullptr; }

const Vec6* EstimateSet::state_of(const TrackLabel& l) const {
  const auto it = std::lower_bound(
      objects.begin(), objects.end(), l,
      [](const std::pair<TrackLabel, Vec6>& a, const TrackLabel& b) { return a.first < b; });
  if (it == objects.end() || it->first != l) return nullptr;
  return &it->second;
}

int map_cardinality(const GlmbDensity& d) {
  const auto rho = cardinality_distribution(d);
  int best = 0;
  for (int n = 1; n < static_cast<int>(rho.size()); ++n) {
    if (rho[n] > rho[best]) best = n;  // strict: ties stay at the smaller n
  }
  return best;
}

int select_hypothesis(const GlmbDensity& d, int n) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(d.hypotheses.size()); ++i) {
    const auto& h = d.hypotheses[i];
    if (h.cardinality() != n) continue;
    if (best < 0 || h.weight > d.hypotheses[best].weight ||
        (h.weight == d.hypotheses[best].weight && h.labels < d.hypotheses[best].labels)) {
      best = i;
    }
  }
  if (best < 0) {
    throw std::out_of_range("select_hypothesis: no hypothesis of cardinality " +
                            std::to_string(n));
  }
  return best;
}

EstimateSet extract_states(const GlmbHypothesis& hyp, int frame, int source_hypothesis) {
  EstimateSet est;
  est.frame = frame;
  est.source_hypothesis = source_hypothesis;
  est.objects.reserve(hyp.labels.size());
  for (const auto& l : hyp.labels) {
    Vec6 x = mixture_mean(hyp.tracks.at(l).mixture);
    x(state::kW) = std::max(x(state::kW), 1e-3);
    x(state::kH) = std::max(x(state::kH), 1e-3);
    est.objects.emplace_back(l, x);
  }
  return est;
}

RecoveryResult id_switch_recovery(const GlmbDensity& d, const EstimateSet& est_prev,
                                  const EstimateSet& est_now,
                                  const VerificationFeatures& features,
                                  const RecoveryThresholds& thresholds) {
  RecoveryResult out;
  out.density = d;
  out.estimate = est_now;

  while (true) {
    const GlmbHypothesis& chosen = out.density.hypotheses[out.estimate.source_hypothesis];

    std::vector<TrackLabel> failing;
    for (const auto& [label, x] : out.estimate.objects) {
      if (!est_prev.has(label)) continue;
      bool ok = true;
      if (auto ref = features.reference_size(label)) {
        if (same_size(x(state::kW), x(state::kH), ref->first, ref->second) < thresholds.t_size) {
          ok = false;
        }
      }
      if (ok) {
        if (auto sim = features.color_similarity(label, chosen)) {
          if (*sim < thresholds.t_color) ok = false;
        }
      }
      if (!ok) failing.push_back(label);
    }
    if (failing.empty()) return out;

    // Try the pool without the offending hypothesis; fall back to the
    // current estimate minus the failing labels when the pool or the
    // re-chosen weight runs out.
    bool fallback = out.density.hypotheses.size() <= 1;
    if (!fallback) {
      GlmbDensity trial = remove_hypothesis_at(out.density, out.estimate.source_hypothesis);
      const int n = map_cardinality(trial);
      const int idx = select_hypothesis(trial, n);
      if (trial.hypotheses[idx].weight < thresholds.t_weight) {
        fallback = true;
      } else {
        out.density = std::move(trial);
        out.estimate = extract_states(out.density.hypotheses[idx], est_now.frame, idx);
        ++out.removed_hypotheses;
        continue;
      }
    }
    if (fallback) {
      std::erase_if(out.estimate.objects, [&](const auto& obj) {
        return std::find(failing.begin(), failing.end(), obj.first) != failing.end();
      });
      out.unverified = std::move(failing);
      return out;
    }
  }
}

}  // namespace glmb
