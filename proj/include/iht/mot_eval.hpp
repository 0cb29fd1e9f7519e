#pragma once

#include <iterator>
#include <map>
#include <set>
#include <vector>

#include "iht/hungarian.hpp"
#include "iht/types.hpp"

namespace iht {

struct MotReport {
  long gt_count = 0;
  long misses = 0;
  long false_positives = 0;
  long switches = 0;
  long reinitializations = 0;
  long matches = 0;
  double mota = 1.0;
  double motp = 0.0;
};

struct MotEvent {
  enum class Kind { match, miss, false_positive, id_switch, reinit } kind;
  int frame = 0;
  int gt = -1;
  int hyp_old = -1;
  int hyp_new = -1;
  double dist = 0.0;
};

// CLEAR MOT scoring. Per frame: keep every previous gt<->hyp correspondence
// still within match_radius, resolve the remainder by minimum-total-distance
// assignment, and classify identity changes: a gt rebinding to a hypothesis
// id previously bound to a different gt is a switch, rebinding to a fresh id
// (or one only ever bound to itself) is a reinitialization.
inline MotReport evaluate(const std::vector<Trajectory>& gt, const std::vector<Trajectory>& hyp,
                          double match_radius, std::vector<MotEvent>* event_log = nullptr) {
  if (match_radius < 0.0) throw UsageError("evaluate: negative match radius");
  constexpr double kBig = 1e12;

  std::map<int, std::map<int, Point>> gt_frames, hyp_frames;
  for (const Trajectory& track : gt)
    for (const Detection& d : track.detections) gt_frames[d.t][track.id] = d.y;
  for (const Trajectory& track : hyp)
    for (const Detection& d : track.detections) hyp_frames[d.t][track.id] = d.y;

  std::set<int> frames;
  for (const auto& [t, _] : gt_frames) frames.insert(t);
  for (const auto& [t, _] : hyp_frames) frames.insert(t);

  MotReport report;
  double motp_sum = 0.0;
  std::map<int, int> binding;          // gt -> hyp, current correspondence
  std::map<int, int> last_hyp_of_gt;   // most recent binding, survives gaps
  std::map<int, int> last_gt_of_hyp;

  const auto log = [&](MotEvent e) {
    if (event_log != nullptr) event_log->push_back(e);
  };

  for (int t : frames) {
    const auto git = gt_frames.find(t);
    const auto hit = hyp_frames.find(t);
    static const std::map<int, Point> empty;
    const std::map<int, Point>& gt_here = git == gt_frames.end() ? empty : git->second;
    const std::map<int, Point>& hyp_here = hit == hyp_frames.end() ? empty : hit->second;
    report.gt_count += static_cast<long>(gt_here.size());

    std::set<int> free_gt, free_hyp;
    for (const auto& [gid, _] : gt_here) free_gt.insert(gid);
    for (const auto& [hid, _] : hyp_here) free_hyp.insert(hid);

    // Keep previous correspondences that are still valid.
    std::vector<int> broken;
    for (const auto& [gid, hid] : binding) {
      const auto gp = gt_here.find(gid);
      const auto hp = hyp_here.find(hid);
      if (gp != gt_here.end() && hp != hyp_here.end()) {
        const double d = distance(gp->second, hp->second);
        if (d <= match_radius) {
          motp_sum += d;
          ++report.matches;
          free_gt.erase(gid);
          free_hyp.erase(hid);
          log({MotEvent::Kind::match, t, gid, hid, hid, d});
          continue;
        }
      }
      broken.push_back(gid);
    }
    for (int gid : broken) binding.erase(gid);

    // Fresh matches by exact min-cost assignment within the radius.
    if (!free_gt.empty() && !free_hyp.empty()) {
      const std::vector<int> gids(free_gt.begin(), free_gt.end());
      const std::vector<int> hids(free_hyp.begin(), free_hyp.end());
      const bool transposed = gids.size() > hids.size();
      const size_t rows = transposed ? hids.size() : gids.size();
      const size_t cols = transposed ? gids.size() : hids.size();
      std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
      for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) {
          const int gid = transposed ? gids[j] : gids[i];
          const int hid = transposed ? hids[i] : hids[j];
          const double d = distance(gt_here.at(gid), hyp_here.at(hid));
          cost[i][j] = d <= match_radius ? d : kBig;
        }
      const std::vector<int> assign = min_cost_assignment(cost);
      for (size_t i = 0; i < rows; ++i) {
        if (assign[i] < 0) continue;
        const size_t j = static_cast<size_t>(assign[i]);
        if (cost[i][j] >= kBig / 2) continue;
        const int gid = transposed ? gids[j] : gids[i];
        const int hid = transposed ? hids[i] : hids[j];

        const auto prev = last_hyp_of_gt.find(gid);
        if (prev != last_hyp_of_gt.end() && prev->second != hid) {
          const auto owner = last_gt_of_hyp.find(hid);
          if (owner != last_gt_of_hyp.end() && owner->second != gid) {
            ++report.switches;
            log({MotEvent::Kind::id_switch, t, gid, prev->second, hid, 0.0});
          } else {
            ++report.reinitializations;
            log({MotEvent::Kind::reinit, t, gid, prev->second, hid, 0.0});
          }
        }

        // If the hypothesis was currently bound elsewhere, that binding ends.
        for (auto it = binding.begin(); it != binding.end();) {
          it = it->second == hid ? binding.erase(it) : std::next(it);
        }
        binding[gid] = hid;
        last_hyp_of_gt[gid] = hid;
        last_gt_of_hyp[hid] = gid;
        motp_sum += cost[i][j];
        ++report.matches;
        free_gt.erase(gid);
        free_hyp.erase(hid);
        log({MotEvent::Kind::match, t, gid, hid, hid, cost[i][j]});
      }
    }

    report.misses += static_cast<long>(free_gt.size());
    report.false_positives += static_cast<long>(free_hyp.size());
    for (int gid : free_gt) log({MotEvent::Kind::miss, t, gid, -1, -1, 0.0});
    for (int hid : free_hyp) log({MotEvent::Kind::false_positive, t, -1, hid, hid, 0.0});
  }

  const long errors =
      report.misses + report.false_positives + report.switches + report.reinitializations;
  report.mota = report.gt_count > 0 ? 1.0 - static_cast<double>(errors) / report.gt_count : 1.0;
  report.motp = report.matches > 0 ? motp_sum / report.matches : 0.0;
  return report;
}

}  // namespace iht
