#include "glmbtrack/glmb.hpp"

#include "glmbtrack/assignment.hpp"
#include "glmbtrack/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace glmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Identity of a hypothesis for exact merging: label set plus each label's
// association history.
using HypKey = std::vector<std::pair<TrackLabel, std::vector<int>>>;

HypKey key_of(const GlmbHypothesis& h) {
  HypKey key;
  key.reserve(h.labels.size());
  for (const auto& l : h.labels) {
    auto it = h.assoc_history.find(l);
    key.emplace_back(l, it == h.assoc_history.end() ? std::vector<int>{} : it->second);
  }
  return key;
}

double log_sum_exp(const std::vector<double>& log_w) {
  double mx = -kInf;
  for (double w : log_w) mx = std::max(mx, w);
  if (!std::isfinite(mx)) return -kInf;
  double s = 0.0;
  for (double w : log_w) s += std::exp(w - mx);
  return mx + std::log(s);
}

void sort_canonical(std::vector<GlmbHypothesis>& hyps) {
  std::vector<HypKey> keys(hyps.size());
  std::vector<std::size_t> order(hyps.size());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    keys[i] = key_of(hyps[i]);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (hyps[a].weight != hyps[b].weight) return hyps[a].weight > hyps[b].weight;
    return keys[a] < keys[b];
  });
  std::vector<GlmbHypothesis> sorted;
  sorted.reserve(hyps.size());
  for (std::size_t i : order) sorted.push_back(std::move(hyps[i]));
  hyps = std::move(sorted);
}

}  // namespace

bool GlmbHypothesis::contains(const TrackLabel& l) const {
  return std::binary_search(labels.begin(), labels.end(), l);
}

GlmbDensity GlmbDensity::prior(int frame) {
  GlmbDensity d;
  d.frame = frame;
  GlmbHypothesis empty;
  empty.weight = 1.0;
  d.hypotheses.push_back(std::move(empty));
  return d;
}

double GlmbDensity::total_weight() const {
  double total = 0.0;
  for (const auto& h : hypotheses) total += h.weight;
  return total;
}

void GlmbDensity::normalize() {
  const double total = total_weight();
  if (total <= 0.0) throw FilterDivergence("hypothesis weights sum to zero");
  for (auto& h : hypotheses) h.weight /= total;
}

GlmbDensity predict(const GlmbDensity& d, const BirthDensity& birth, const FilterParams& params) {
  const int next_frame = d.frame + 1;

  // Rank all (parent, survive/die + birth subset) candidates by weight
  // before materializing any of them; only the heaviest max_hypotheses
  // get their tracks predicted and copied.
  struct Candidate {
    std::size_t parent;
    DagPath path;
    double weight;
  };
  std::vector<Candidate> candidates;

  for (std::size_t pi = 0; pi < d.hypotheses.size(); ++pi) {
    const auto& parent = d.hypotheses[pi];
    for (const auto& bp : birth.points) {
      if (parent.contains(bp.label)) {
        throw std::logic_error("predict: birth label already present in a hypothesis");
      }
    }

    // One survive/die arc pair per existing label, then one born/skip pair
    // per birth point; a path picks a joint (J, L+) subset.
    LayeredDag dag;
    dag.arc_costs.reserve(parent.labels.size() + birth.points.size());
    for (std::size_t i = 0; i < parent.labels.size(); ++i) {
      dag.arc_costs.push_back({-std::log(params.p_survive), -std::log(1.0 - params.p_survive)});
    }
    for (const auto& bp : birth.points) {
      dag.arc_costs.push_back({-std::log(bp.r_birth), -std::log(1.0 - bp.r_birth)});
    }

    for (DagPath& path : k_shortest_paths(dag, params.k_predict)) {
      if (!std::isfinite(path.cost)) continue;  // e.g. certain survival's die arc
      const double w = parent.weight * std::exp(-path.cost);
      if (w <= 0.0) continue;
      candidates.push_back(Candidate{pi, std::move(path), w});
    }
  }

  if (candidates.size() > static_cast<std::size_t>(params.max_hypotheses)) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      if (a.parent != b.parent) return a.parent < b.parent;
      return a.path.arcs < b.path.arcs;
    });
    candidates.resize(static_cast<std::size_t>(params.max_hypotheses));
  }

  std::map<HypKey, std::size_t> merged;
  std::vector<GlmbHypothesis> children;
  for (const Candidate& cand : candidates) {
    const auto& parent = d.hypotheses[cand.parent];
    GlmbHypothesis child;
    child.weight = cand.weight;

    const std::size_t n = parent.labels.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (cand.path.arcs[i] != 0) continue;  // died
      const TrackLabel& l = parent.labels[i];
      child.labels.push_back(l);
      child.assoc_history[l] = parent.assoc_history.at(l);
      LabeledGaussianTrack t = parent.tracks.at(l);
      for (auto& comp : t.mixture) comp = kalman_predict(comp, params.motion);
      child.tracks.emplace(l, std::move(t));
    }
    for (std::size_t b = 0; b < birth.points.size(); ++b) {
      if (cand.path.arcs[n + b] != 0) continue;  // not born
      const auto& bp = birth.points[b];
      child.labels.push_back(bp.label);
      child.assoc_history[bp.label] = {};
      LabeledGaussianTrack t;
      t.label = bp.label;
      t.mixture = {bp.prior};
      t.mixture.front().weight = 1.0;
      t.birth_gate = bp.valid_meas;
      child.tracks.emplace(bp.label, std::move(t));
    }
    std::sort(child.labels.begin(), child.labels.end());

    HypKey key = key_of(child);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(std::move(key), children.size());
      children.push_back(std::move(child));
    } else {
      children[it->second].weight += child.weight;
    }
  }

  GlmbDensity out;
  out.frame = next_frame;
  out.hypotheses = std::move(children);
  sort_canonical(out.hypotheses);
  out.normalize();
  return out;
}

UpdateResult update(const GlmbDensity& d, const DetectionFrame& z, const FilterParams& params) {
  const int m = static_cast<int>(z.detections.size());
  std::vector<Vec4> meas(m);
  for (int j = 0; j < m; ++j) meas[j] = measurement_from_box(z.detections[j].box);

  std::vector<GlmbHypothesis> children;
  std::vector<double> log_weights;

  // Tracks with equal (label, history) have equal densities across parent
  // hypotheses, so association costs and updated tracks are shared per frame.
  using TrackKey = std::pair<TrackLabel, std::vector<int>>;
  std::map<TrackKey, Eigen::VectorXd> cost_rows;
  std::map<std::pair<TrackKey, int>, LabeledGaussianTrack> posteriors;

  auto cost_row_of = [&](const TrackKey& key,
                         const LabeledGaussianTrack& track) -> const Eigen::VectorXd& {
    auto it = cost_rows.find(key);
    if (it != cost_rows.end()) return it->second;
    Eigen::VectorXd row(m);
    row.setConstant(kInf);
    for (int j = 0; j < m; ++j) {
      if (!track.birth_gate.empty() &&
          std::find(track.birth_gate.begin(), track.birth_gate.end(), j) ==
              track.birth_gate.end()) {
        continue;
      }
      if (mixture_min_mahalanobis(track.mixture, meas[j], params.measurement) >
          params.gate_mahalanobis) {
        continue;
      }
      const double q = mixture_likelihood(track.mixture, meas[j], params.measurement);
      const double psi = params.p_detect * q / params.clutter_intensity;
      if (psi > 0.0) row(j) = -std::log(psi);
    }
    return cost_rows.emplace(key, std::move(row)).first->second;
  };

  auto posterior_of = [&](const TrackKey& key, const LabeledGaussianTrack& track,
                          int assoc) -> const LabeledGaussianTrack& {
    const auto full_key = std::make_pair(key, assoc);
    auto it = posteriors.find(full_key);
    if (it != posteriors.end()) return it->second;
    LabeledGaussianTrack t = track;
    if (assoc >= 1) {
      for (auto& comp : t.mixture) {
        auto res = kalman_update(comp, meas[assoc - 1], params.measurement);
        res.posterior.weight = comp.weight * res.likelihood;
        comp = res.posterior;
      }
      normalize_mixture(t.mixture);
      t.mixture = mixture_prune_merge(t.mixture, params.mixture_prune_thresh,
                                      params.mixture_merge_dist,
                                      static_cast<std::size_t>(params.mixture_max_components));
      t.last_update = d.frame;
    }
    t.birth_gate.clear();
    return posteriors.emplace(full_key, std::move(t)).first->second;
  };

  for (const auto& parent : d.hypotheses) {
    const int n = parent.cardinality();
    const double log_parent = std::log(parent.weight);
    if (!std::isfinite(log_parent)) continue;

    if (n == 0) {
      children.push_back(parent);
      log_weights.push_back(log_parent);
      continue;
    }

    std::vector<TrackKey> keys;
    keys.reserve(n);
    CostMatrix cost(n, m + n);
    cost.setConstant(kInf);
    for (int i = 0; i < n; ++i) {
      const TrackLabel& l = parent.labels[i];
      keys.emplace_back(l, parent.assoc_history.at(l));
      cost.row(i).head(m) = cost_row_of(keys.back(), parent.tracks.at(l));
      cost(i, m + i) = -std::log(1.0 - params.p_detect);
    }

    const int budget = std::clamp(
        static_cast<int>(std::llround(params.k_update * parent.weight)), 1, params.k_update);

    for (const Assignment& a : murty_k_best(cost, budget)) {
      GlmbHypothesis child;
      child.labels = parent.labels;
      child.weight = 0.0;  // filled after normalization

      for (int i = 0; i < n; ++i) {
        const TrackLabel& l = parent.labels[i];
        const int col = a.row_to_col[i];
        const int assoc = col < m ? col + 1 : 0;
        child.tracks.emplace(l, posterior_of(keys[i], parent.tracks.at(l), assoc));
        std::vector<int> history = keys[i].second;
        history.push_back(assoc);
        child.assoc_history.emplace(l, std::move(history));
      }
      children.push_back(std::move(child));
      log_weights.push_back(log_parent - a.cost);
    }
  }

  if (children.empty()) {
    throw FilterDivergence("update produced no hypotheses at frame " + std::to_string(d.frame));
  }

  const double log_total = log_sum_exp(log_weights);
  for (std::size_t i = 0; i < children.size(); ++i) {
    children[i].weight = std::exp(log_weights[i] - log_total);
  }

  UpdateResult out;
  out.density.frame = d.frame;
  out.density.hypotheses = std::move(children);
  sort_canonical(out.density.hypotheses);

  auto& hyps = out.density.hypotheses;
  if (static_cast<int>(hyps.size()) > params.max_hypotheses) {
    hyps.resize(params.max_hypotheses);
    out.density.normalize();
  }
  std::erase_if(hyps, [&](const GlmbHypothesis& h) { return h.weight < params.min_hyp_weight; });
  if (hyps.empty()) {
    throw FilterDivergence("hypothesis pool empty after truncation at frame " +
                           std::to_string(d.frame));
  }
  out.density.normalize();
  sort_canonical(hyps);

  out.best_hypothesis = select_hypothesis(out.density, map_cardinality(out.density));
  out.unassigned = unassigned_measurements(hyps[out.best_hypothesis], m);
  return out;
}

std::vector<double> cardinality_distribution(const GlmbDensity& d) {
  int max_n = 0;
  for (const auto& h : d.hypotheses) max_n = std::max(max_n, h.cardinality());
  std::vector<double> rho(max_n + 1, 0.0);
  for (const auto& h : d.hypotheses) rho[h.cardinality()] += h.weight;
  return rho;
}

GlmbDensity remove_hypotheses_with_label(const GlmbDensity& d, const TrackLabel& label) {
  GlmbDensity out;
  out.frame = d.frame;
  for (const auto& h : d.hypotheses) {
    if (!h.contains(label)) out.hypotheses.push_back(h);
  }
  if (out.hypotheses.empty()) {
    throw PoolExhausted("every hypothesis contains the label being removed");
  }
  out.normalize();
  return out;
}

GlmbDensity remove_hypothesis_at(const GlmbDensity& d, int index) {
  if (d.hypotheses.size() <= 1) {
    throw PoolExhausted("cannot remove the last hypothesis");
  }
  GlmbDensity out;
  out.frame = d.frame;
  for (int i = 0; i < static_cast<int>(d.hypotheses.size()); ++i) {
    if (i != index) out.hypotheses.push_back(d.hypotheses[i]);
  }
  out.normalize();
  return out;
}

std::vector<int> unassigned_measurements(const GlmbHypothesis& hyp, int measurement_count) {
  std::vector<char> used(measurement_count, 0);
  for (const auto& [label, history] : hyp.assoc_history) {
    if (!hyp.contains(label) || history.empty()) continue;
    const int j = history.back();
    if (j >= 1 && j <= measurement_count) used[j - 1] = 1;
  }
  std::vector<int> out;
  for (int j = 0; j < measurement_count; ++j) {
    if (!used[j]) out.push_back(j);
  }
  return out;
}

}  // namespace glmb
