#include "glmbtrack/metrics.hpp"

#include "glmbtrack/assignment.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace glmb {

namespace {

// High miss cost so the bipartite solve maximizes match count first, then
// minimizes total (1 - IOU); any real match costs at most 1.
constexpr double kMissCost = 1e6;

std::map<int, std::vector<const TrackRecord*>> group_by_frame(
    const std::vector<TrackRecord>& records) {
  std::map<int, std::vector<const TrackRecord*>> by_frame;
  for (const auto& r : records) by_frame[r.frame].push_back(&r);
  return by_frame;
}

}  // namespace

EvalReport evaluate(const std::vector<TrackRecord>& gt, const std::vector<TrackRecord>& hyp,
                    double iou_thresh) {
  EvalReport rep;

  const auto gt_frames = group_by_frame(gt);
  const auto hyp_frames = group_by_frame(hyp);

  std::set<int> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : hyp_frames) frames.insert(f);

  std::map<int, int> active_match;             // gt_id -> hyp_id carried between frames
  std::map<int, int> last_matched_hyp;         // gt_id -> hyp_id at its last match ever
  std::map<int, int> gt_span, gt_covered;      // per-trajectory frame counts
  double iou_sum = 0.0;

  for (int frame : frames) {
    FrameMatchLog log;
    log.frame = frame;

    const auto git = gt_frames.find(frame);
    const auto hit = hyp_frames.find(frame);
    const std::vector<const TrackRecord*> empty;
    const auto& g = git == gt_frames.end() ? empty : git->second;
    const auto& h = hit == hyp_frames.end() ? empty : hit->second;

    for (const auto* r : g) ++gt_span[r->track_id];
    rep.total_gt += static_cast<long long>(g.size());

    std::map<int, const TrackRecord*> hyp_by_id;
    for (const auto* r : h) hyp_by_id[r->track_id] = r;

    std::vector<char> g_done(g.size(), 0);
    std::set<int> h_used;

    // Persist previous-frame matches that still clear the threshold.
    std::vector<std::pair<int, int>> matched;  // (gt index, hyp_id)
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto am = active_match.find(g[i]->track_id);
      if (am == active_match.end()) continue;
      auto hb = hyp_by_id.find(am->second);
      if (hb == hyp_by_id.end() || h_used.count(am->second)) continue;
      const double overlap = iou(g[i]->box, hb->second->box);
      if (overlap >= iou_thresh) {
        matched.emplace_back(static_cast<int>(i), am->second);
        g_done[i] = 1;
        h_used.insert(am->second);
      }
    }

    // Bipartite matching on the rest.
    std::vector<int> free_g, free_h;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!g_done[i]) free_g.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < h.size(); ++j)
      if (!h_used.count(h[j]->track_id)) free_h.push_back(static_cast<int>(j));

    if (!free_g.empty()) {
      const int rows = static_cast<int>(free_g.size());
      const int cols = static_cast<int>(free_h.size());
      CostMatrix cost(rows, cols + rows);
      cost.setConstant(kForbidden);
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          const double overlap = iou(g[free_g[i]]->box, h[free_h[j]]->box);
          if (overlap >= iou_thresh) cost(i, j) = 1.0 - overlap;
        }
        cost(i, cols + i) = kMissCost;
      }
      const Assignment sol = best_assignment(cost);
      for (int i = 0; i < rows; ++i) {
        if (sol.row_to_col[i] < cols) {
          const int hyp_id = h[free_h[sol.row_to_col[i]]]->track_id;
          matched.emplace_back(free_g[i], hyp_id);
          g_done[free_g[i]] = 1;
          h_used.insert(hyp_id);
        }
      }
    }

    std::sort(matched.begin(), matched.end());
    std::map<int, int> next_active;  // only matches made this frame carry over
    for (auto [gi, hyp_id] : matched) {
      const int gt_id = g[gi]->track_id;
      const double overlap = iou(g[gi]->box, hyp_by_id[hyp_id]->box);
      iou_sum += overlap;
      ++rep.tp;
      ++gt_covered[gt_id];
      auto lm = last_matched_hyp.find(gt_id);
      if (lm != last_matched_hyp.end() && lm->second != hyp_id) {
        ++rep.idsw;
        ++log.idsw;
      }
      last_matched_hyp[gt_id] = hyp_id;
      next_active[gt_id] = hyp_id;
      log.matches.emplace_back(gt_id, hyp_id, overlap);
    }
    active_match = std::move(next_active);

    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g_done[i]) {
        ++rep.fn;
        ++log.fn;
      }
    }
    const int fp_here = static_cast<int>(h.size()) - static_cast<int>(h_used.size());
    rep.fp += fp_here;
    log.fp = fp_here;

    rep.frames.push_back(std::move(log));
  }

  rep.gt_tracks = static_cast<int>(gt_span.size());
  for (const auto& [id, span] : gt_span) {
    const double ratio = span > 0 ? static_cast<double>(gt_covered[id]) / span : 0.0;
    if (ratio >= 0.8) ++rep.mostly_tracked;
    if (ratio <= 0.2) ++rep.mostly_lost;
  }

  rep.mota = rep.total_gt > 0
                 ? 100.0 * (1.0 - static_cast<double>(rep.fn + rep.fp + rep.idsw) /
                                      static_cast<double>(rep.total_gt))
                 : 100.0;
  rep.motp = rep.tp > 0 ? 100.0 * iou_sum / static_cast<double>(rep.tp) : 0.0;
  rep.precision =
      rep.tp + rep.fp > 0
          ? 100.0 * static_cast<double>(rep.tp) / static_cast<double>(rep.tp + rep.fp)
          : 0.0;
  rep.mt_pct = rep.gt_tracks > 0 ? 100.0 * rep.mostly_tracked / rep.gt_tracks : 0.0;
  rep.ml_pct = rep.gt_tracks > 0 ? 100.0 * rep.mostly_lost / rep.gt_tracks : 0.0;
  return rep;
}

std::string EvalReport::table() const {
  std::array<char, 256> buf{};
  std::string out;
  out += "  MOTA   MOTP    MT%    ML%       FP       FN   IDsw   Prec%\n";
  std::snprintf(buf.data(), buf.size(), "%6.1f %6.1f %6.1f %6.1f %8lld %8lld %6lld %7.1f\n",
                mota, motp, mt_pct, ml_pct, fp, fn, idsw, precision);
  out += buf.data();
  return out;
}

std::string EvalReport::csv() const {
  std::ostringstream out;
  out << "MOTA,MOTP,MT_pct,ML_pct,FP,FN,IDsw,Precision,TP,total_gt\n";
  out << mota << ',' << motp << ',' << mt_pct << ',' << ml_pct << ',' << fp << ',' << fn << ','
      << idsw << ',' << precision << ',' << tp << ',' << total_gt << '\n';
  return out.str();
}

}  // namespace glmb
