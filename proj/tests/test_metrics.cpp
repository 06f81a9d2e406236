#include "glmbtrack/metrics.hpp"

#include <doctest.h>

using namespace glmb;

namespace {

std::vector<TrackRecord> straight_track(int id, int frames, double x0, double step) {
  std::vector<TrackRecord> out;
  for (int f = 1; f <= frames; ++f) {
    out.push_back(TrackRecord{f, id, Box{x0 + step * (f - 1), 100, 40, 80}, 1.0});
  }
  return out;
}

}  // namespace

TEST_CASE("evaluate: identical hypothesis is a perfect report") {
  const auto gt = straight_track(1, 10, 50, 5);
  const auto rep = evaluate(gt, gt, 0.5);
  CHECK(rep.mota == doctest::Approx(100.0));
  CHECK(rep.motp == doctest::Approx(100.0));
  CHECK(rep.fp == 0);
  CHECK(rep.fn == 0);
  CHECK(rep.idsw == 0);
  CHECK(rep.precision == doctest::Approx(100.0));
  CHECK(rep.mt_pct == doctest::Approx(100.0));
  CHECK(rep.ml_pct == doctest::Approx(0.0));
}

TEST_CASE("evaluate: empty hypothesis misses everything") {
  const auto gt = straight_track(1, 10, 50, 5);
  const auto rep = evaluate(gt, {}, 0.5);
  CHECK(rep.mota == doctest::Approx(0.0));
  CHECK(rep.fn == 10);
  CHECK(rep.precision == doctest::Approx(0.0));
  CHECK(rep.ml_pct == doctest::Approx(100.0));
}

TEST_CASE("evaluate: one id change on a 10-frame track costs exactly one switch") {
  const auto gt = straight_track(1, 10, 50, 5);
  auto hyp = gt;
  for (auto& r : hyp) {
    r.track_id = r.frame >= 6 ? 2 : 1;
  }
  const auto rep = evaluate(gt, hyp, 0.5);
  CHECK(rep.idsw == 1);
  CHECK(rep.fp == 0);
  CHECK(rep.fn == 0);
  CHECK(rep.mota == doctest::Approx(90.0));
}

TEST_CASE("evaluate: switches are counted across coverage gaps") {
  auto gt = straight_track(1, 6, 50, 5);
  std::vector<TrackRecord> hyp;
  for (const auto& r : gt) {
    if (r.frame == 3) continue;  // hypothesis gap
    TrackRecord h = r;
    h.track_id = r.frame > 3 ? 7 : 4;
    hyp.push_back(h);
  }
  const auto rep = evaluate(gt, hyp, 0.5);
  CHECK(rep.fn == 1);
  CHECK(rep.idsw == 1);  // id 4 -> 7 despite the unmatched frame between
}

TEST_CASE("evaluate: match persistence beats a newly appearing overlap") {
  // A second hypothesis box overlapping slightly better must not steal a
  // persisting match.
  std::vector<TrackRecord> gt;
  std::vector<TrackRecord> hyp;
  for (int f = 1; f <= 3; ++f) {
    gt.push_back(TrackRecord{f, 1, Box{100, 100, 40, 80}, 1.0});
    hyp.push_back(TrackRecord{f, 11, Box{104, 100, 40, 80}, 1.0});
    if (f >= 2) {
      hyp.push_back(TrackRecord{f, 12, Box{100, 100, 40, 80}, 1.0});  // exact overlap
    }
  }
  const auto rep = evaluate(gt, hyp, 0.5);
  CHECK(rep.idsw == 0);
  CHECK(rep.fp == 2);  // id 12 unmatched in frames 2 and 3
}

TEST_CASE("evaluate: unmatched hypotheses are false positives and MOTA can go negative") {
  const auto gt = straight_track(1, 4, 50, 5);
  auto hyp = gt;
  for (int f = 1; f <= 4; ++f) {
    for (int extra = 0; extra < 2; ++extra) {
      hyp.push_back(TrackRecord{f, 100 + extra, Box{1000 + 200.0 * extra, 500, 40, 80}, 1.0});
    }
  }
  const auto rep = evaluate(gt, hyp, 0.5);
  CHECK(rep.fp == 8);
  CHECK(rep.mota == doctest::Approx(100.0 * (1.0 - 8.0 / 4.0)));
  CHECK(rep.mota <= 100.0);
}

TEST_CASE("evaluate: report formats render") {
  const auto gt = straight_track(1, 3, 50, 5);
  const auto rep = evaluate(gt, gt, 0.5);
  CHECK(rep.table().find("MOTA") != std::string::npos);
  CHECK(rep.csv().find("MOTA,MOTP") != std::string::npos);
}
