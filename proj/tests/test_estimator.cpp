#include "glmbtrack/estimator.hpp"

#include <doctest.h>

#include <map>

using namespace glmb;

namespace {

GaussianComponent comp_at(double px, double w, double h, double weight = 1.0) {
  GaussianComponent c;
  c.weight = weight;
  c.mean << px, 50, 0, 0, w, h;
  c.covariance = Mat6::Identity();
  return c;
}

GlmbHypothesis hyp_of(double weight, std::vector<std::pair<TrackLabel, GaussianComponent>> tracks,
                      int assoc = 1) {
  GlmbHypothesis h;
  h.weight = weight;
  for (auto& [label, comp] : tracks) {
    h.labels.push_back(label);
    h.assoc_history[label] = {assoc};
    LabeledGaussianTrack t;
    t.label = label;
    t.mixture = {comp};
    h.tracks.emplace(label, std::move(t));
  }
  std::sort(h.labels.begin(), h.labels.end());
  return h;
}

// Verification fake fed by explicit similarity tables.
class FakeFeatures : public VerificationFeatures {
 public:
  std::map<TrackLabel, double> color;
  std::map<TrackLabel, std::pair<double, double>> sizes;

  std::optional<double> color_similarity(const TrackLabel& label,
                                         const GlmbHypothesis& h) const override {
    (void)h;
    const auto it = color.find(label);
    if (it == color.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::pair<double, double>> reference_size(const TrackLabel& label) const override {
    const auto it = sizes.find(label);
    if (it == sizes.end()) return std::nullopt;
    return it->second;
  }
};

const TrackLabel kA{0, 0};
const TrackLabel kB{0, 1};

}  // namespace

TEST_CASE("map_cardinality picks the modal count, ties toward fewer") {
  GlmbDensity d;
  d.hypotheses.push_back(hyp_of(0.4, {{kA, comp_at(10, 40, 80)}}));
  d.hypotheses.push_back(hyp_of(0.6, {{kA, comp_at(10, 40, 80)}, {kB, comp_at(90, 40, 80)}}));
  CHECK(map_cardinality(d) == 2);

  GlmbDensity single;
  single.hypotheses.push_back(hyp_of(1.0, {}));
  CHECK(map_cardinality(single) == 0);

  GlmbDensity tie;
  tie.hypotheses.push_back(hyp_of(0.5, {{kA, comp_at(10, 40, 80)}}));
  tie.hypotheses.push_back(hyp_of(0.5, {{kA, comp_at(10, 40, 80)}, {kB, comp_at(90, 40, 80)}}));
  CHECK(map_cardinality(tie) == 1);
}

TEST_CASE("select_hypothesis prefers weight then lexicographic labels") {
  GlmbDensity d;
  d.hypotheses.push_back(hyp_of(0.25, {{kB, comp_at(90, 40, 80)}}));
  d.hypotheses.push_back(hyp_of(0.30, {{kA, comp_at(10, 40, 80)}}));
  d.hypotheses.push_back(hyp_of(0.45, {{kA, comp_at(10, 40, 80)}, {kB, comp_at(90, 40, 80)}}));
  CHECK(select_hypothesis(d, 1) == 1);
  CHECK(select_hypothesis(d, 2) == 2);
  CHECK_THROWS_AS(select_hypothesis(d, 3), std::out_of_range);

  GlmbDensity tie;
  tie.hypotheses.push_back(hyp_of(0.5, {{kB, comp_at(90, 40, 80)}}));
  tie.hypotheses.push_back(hyp_of(0.5, {{kA, comp_at(10, 40, 80)}}));
  CHECK(select_hypothesis(tie, 1) == 1);  // {A} < {B}
}

TEST_CASE("extract_states takes mixture means") {
  SUBCASE("single component") {
    const auto h = hyp_of(1.0, {{kA, comp_at(7, 40, 80)}});
    const auto est = extract_states(h, 3, 0);
    REQUIRE(est.objects.size() == 1);
    CHECK(est.objects[0].second(state::kPx) == doctest::Approx(7.0));
    CHECK(est.frame == 3);
  }
  SUBCASE("equal weights average") {
    GlmbHypothesis h = hyp_of(1.0, {{kA, comp_at(0, 40, 80, 0.5)}});
    h.tracks.at(kA).mixture.push_back(comp_at(10, 40, 80, 0.5));
    const auto est = extract_states(h, 1, 0);
    CHECK(est.objects[0].second(state::kPx) == doctest::Approx(5.0));
  }
  SUBCASE("weighted average") {
    GlmbHypothesis h = hyp_of(1.0, {{kA, comp_at(0, 40, 80, 0.9)}});
    h.tracks.at(kA).mixture.push_back(comp_at(10, 40, 80, 0.1));
    const auto est = extract_states(h, 1, 0);
    CHECK(est.objects[0].second(state::kPx) == doctest::Approx(1.0));
  }
}

TEST_CASE("id_switch_recovery leaves a verified estimate alone") {
  GlmbDensity d;
  d.hypotheses.push_back(hyp_of(0.7, {{kA, comp_at(10, 40, 80)}}));
  d.hypotheses.push_back(hyp_of(0.3, {{kB, comp_at(90, 40, 80)}}));
  const auto est_prev = extract_states(d.hypotheses[0], 1, 0);
  const auto est_now = extract_states(d.hypotheses[0], 2, 0);

  FakeFeatures f;
  f.color[kA] = 0.9;
  f.sizes[kA] = {40, 80};
  const auto res = id_switch_recovery(d, est_prev, est_now, f, RecoveryThresholds{});
  CHECK(res.density.hypotheses.size() == 2);
  CHECK(res.removed_hypotheses == 0);
  CHECK(res.unverified.empty());
  CHECK(res.estimate.has(kA));
}

TEST_CASE("id_switch_recovery switches to the next hypothesis when color fails") {
  // Chosen hypothesis: {A at the wrong box}. Alternative of the same
  // cardinality passes verification.
  GlmbDensity d;
  d.hypotheses.push_back(hyp_of(0.6, {{kA, comp_at(90, 40, 80)}}, 1));
  d.hypotheses.push_back(hyp_of(0.4, {{kA, comp_at(10, 40, 80)}}, 2));
  const auto est_prev = extract_states(d.hypotheses[1], 1, 1);

  FakeFeatures f;
  f.color[kA] = 0.1;  // fails against t_color = 0.5 in the chosen hypothesis
  f.sizes[kA] = {40, 80};

  // Color depends on the hypothesis under test: fail only for the first.
  class PerHypFeatures : public FakeFeatures {
   public:
    std::optional<double> color_similarity(const TrackLabel& label,
                                           const GlmbHypothesis& h) const override {
      if (h.assoc_history.at(label).back() == 1) return 0.1;
      return 0.95;
    }
  } per_hyp;
  per_hyp.sizes[kA] = {40, 80};

  const auto est_now = extract_states(d.hypotheses[0], 2, 0);
  const auto res = id_switch_recovery(d, est_prev, est_now, per_hyp, RecoveryThresholds{});
  CHECK(res.removed_hypotheses == 1);
  CHECK(res.density.hypotheses.size() == 1);
  CHECK(res.density.hypotheses[0].weight == doctest::Approx(1.0));
  CHECK(res.unverified.empty());
  REQUIRE(res.estimate.has(kA));
  CHECK((*res.estimate.state_of(kA))(state::kPx) == doctest::Approx(10.0));
}

TEST_CASE("id_switch_recovery falls back when alternatives are below the weight floor") {
  GlmbDensity d;
  d.hypotheses.push_back(hyp_of(0.9, {{kA, comp_at(10, 40, 80)}, {kB, comp_at(90, 40, 80)}}));
  d.hypotheses.push_back(hyp_of(0.1, {{kA, comp_at(10, 40, 80)}}));
  const auto est_prev = extract_states(d.hypotheses[0], 1, 0);
  const auto est_now = extract_states(d.hypotheses[0], 2, 0);

  FakeFeatures f;
  f.color[kB] = 0.0;  // B always fails
  f.color[kA] = 1.0;
  f.sizes[kA] = {40, 80};
  f.sizes[kB] = {40, 80};

  RecoveryThresholds thresholds;
  thresholds.t_weight = 2.0;  // nothing can clear the floor
  const auto res = id_switch_recovery(d, est_prev, est_now, f, thresholds);
  CHECK(res.density.hypotheses.size() == 2);  // removal rolled back
  CHECK(res.unverified == std::vector<TrackLabel>{kB});
  CHECK(res.estimate.has(kA));
  CHECK_FALSE(res.estimate.has(kB));
}

TEST_CASE("id_switch_recovery with zero thresholds is the identity") {
  GlmbDensity d;
  d.hypotheses.push_back(hyp_of(0.7, {{kA, comp_at(10, 40, 80)}}));
  d.hypotheses.push_back(hyp_of(0.3, {{kB, comp_at(90, 40, 80)}}));
  const auto est_prev = extract_states(d.hypotheses[0], 1, 0);
  const auto est_now = extract_states(d.hypotheses[0], 2, 0);

  FakeFeatures f;
  f.color[kA] = 0.0;
  f.sizes[kA] = {1, 1};  // grossly different size

  RecoveryThresholds zero;
  zero.t_size = 0.0;
  zero.t_color = 0.0;
  const auto res = id_switch_recovery(d, est_prev, est_now, f, zero);
  CHECK(res.removed_hypotheses == 0);
  CHECK(res.unverified.empty());
  CHECK(res.estimate.has(kA));
}

TEST_CASE("id_switch_recovery renormalizes at every iteration and terminates") {
  GlmbDensity d;
  for (int i = 0; i < 5; ++i) {
    d.hypotheses.push_back(hyp_of(0.2, {{kA, comp_at(10.0 + i, 40, 80)}}, i + 1));
  }
  const auto est_prev = extract_states(d.hypotheses[0], 1, 0);
  const auto est_now = extract_states(d.hypotheses[0], 2, 0);

  FakeFeatures f;
  f.color[kA] = 0.0;  // every hypothesis fails
  f.sizes[kA] = {40, 80};
  const auto res = id_switch_recovery(d, est_prev, est_now, f, RecoveryThresholds{});
  CHECK(res.removed_hypotheses <= 5);
  CHECK(res.density.total_weight() == doctest::Approx(1.0));
  CHECK(res.unverified == std::vector<TrackLabel>{kA});
}
