#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "iht/hypothesis.hpp"
#include "iht/rng.hpp"

namespace iht {

enum class SchedulePolicy { longest_first, random, confidence_first, recency };

// Linear loosening of the validation bounds, one step per graph scan. K2
// typically reaches its end before K1: low absolute cost stays the primary
// requirement while ambiguity tolerance grows.
struct RelaxSchedule {
  double k1_start = 5.0, k1_end = 30.0;
  int k1_iters = 50;
  double k2_start = 0.25, k2_end = 1.0 / 1.1;
  int k2_iters = 20;

  static double ramp(double a, double b, int iters, int scan) {
    const int step = std::clamp(scan - 1, 0, iters);
    return a + (b - a) * step / iters;
  }
  double k1_at(int scan) const { return ramp(k1_start, k1_end, k1_iters, scan); }
  double k2_at(int scan) const { return ramp(k2_start, k2_end, k2_iters, scan); }

  bool valid() const {
    return k1_start <= k1_end && k2_start <= k2_end && k1_iters >= 1 && k2_iters >= 1;
  }
};

// Values for the scan following `scan_index`, each parameter advancing one
// linear step and clamping at its end value.
inline std::pair<double, double> relax(double /*k1*/, double /*k2*/, const RelaxSchedule& s,
                                       int scan_index) {
  return {s.k1_at(scan_index + 1), s.k2_at(scan_index + 1)};
}

struct DriverConfig {
  GraphParams graph;
  AppearanceParams appearance;
  ValidationParams validation;  // k1/k2 are per-scan; kappa and window mode apply as-is
  RelaxSchedule relax;
  SchedulePolicy policy = SchedulePolicy::longest_first;
  ValidationMode validation_mode = ValidationMode::conservative;
  int max_iter = 60;
  int delta_slide = 200;  // incremental: conservative horizon (frames)
  int flush_scans = -1;   // incremental: post-stream scan cap, -1 = auto
  uint64_t seed = 0;
  bool confidence_blind = false;  // strip confidences before tracking

  bool valid() const {
    return graph.valid() && appearance.valid() && validation.valid() && relax.valid() &&
           max_iter >= 1 && delta_slide >= 1;
  }
};

struct DriverStats {
  int scans = 0;
  long tests = 0;
  long validations = 0;
  long conservative_tests = 0;
  long relaxed_tests = 0;
  std::vector<int> scan_directions;
  std::vector<size_t> node_counts;  // after each scan
};

struct TrackResult {
  std::vector<Trajectory> tracks;
  DriverStats stats;
};

// Scan-ordering of the pending set under a scheduling policy. Scores are
// fixed for the duration of one scan: merges only ever consume pending nodes
// and the merged node waits for the next scan.
inline std::vector<NodeId> scan_order(const TrackletGraph& g, std::vector<NodeId> ids,
                                      SchedulePolicy policy, Rng rng,
                                      std::optional<int> now = std::nullopt) {
  switch (policy) {
    case SchedulePolicy::random:
      for (size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng.below(i)]);
      return ids;
    case SchedulePolicy::longest_first:
    case SchedulePolicy::confidence_first:
    case SchedulePolicy::recency: {
      auto score = [&](NodeId id) -> double {
        const Tracklet& t = g.tracklet(id);
        if (policy == SchedulePolicy::confidence_first) return t.total_conf_mass();
        if (policy == SchedulePolicy::recency) {
          const int age = now ? std::max(1, *now - t.t_end) : 1;
          return static_cast<double>(t.length()) / age;
        }
        return t.length();
      };
      std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
        const double sa = score(a), sb = score(b);
        if (sa != sb) return sa > sb;
        const int ta = g.tracklet(a).t_start, tb = g.tracklet(b).t_start;
        if (ta != tb) return ta < tb;
        return a < b;
      });
      return ids;
    }
  }
  return ids;
}

// Next key-node to investigate from a nonempty pending set.
inline NodeId schedule(const TrackletGraph& g, const std::vector<NodeId>& pending,
                       SchedulePolicy policy, Rng rng, std::optional<int> now = std::nullopt) {
  if (pending.empty()) throw InvariantError("schedule: empty pending set");
  return scan_order(g, pending, policy, rng, now).front();
}

inline std::vector<Detection> strip_confidences(std::vector<Detection> dets) {
  for (Detection& d : dets)
    for (double& c : d.confidences) c = 1.0;
  return dets;
}

namespace detail {

// One full scan: every pending node is scheduled once; validated paths are
// merged immediately and their nodes leave the pending set.
template <typename ParamsFor>
inline void run_scan(TrackletGraph& g, PathEngine& engine, const DriverConfig& cfg, int dir,
                     Rng scan_rng, std::optional<int> now, ParamsFor&& params_for,
                     DriverStats& stats) {
  const std::vector<NodeId> order = scan_order(g, g.alive_nodes(), cfg.policy, scan_rng, now);
  std::vector<uint8_t> pending(static_cast<size_t>(g.capacity()), 1);
  for (NodeId key : order) {
    if (!g.alive(key) || !pending[static_cast<size_t>(key)]) continue;
    const ValidationParams vp = params_for(key);
    const HypothesisResult res =
        hypothesis_test(g, engine, key, dir, vp, cfg.appearance, cfg.validation_mode);
    ++stats.tests;
    if (res.validated()) {
      for (NodeId n : res.path)
        if (static_cast<size_t>(n) < pending.size()) pending[static_cast<size_t>(n)] = 0;
      g.simplify(res.path);
      ++stats.validations;
    } else {
      pending[static_cast<size_t>(key)] = 0;
    }
  }
  ++stats.scans;
  stats.scan_directions.push_back(dir);
  stats.node_counts.push_back(g.node_count());
}

}  // namespace detail

// Offline driver: build the full graph, then alternate forward/backward
// scans under progressively relaxed validation bounds. Whatever tracklets
// remain after the last scan are the trajectories.
inline TrackResult run_offline(const std::vector<Detection>& detections,
                               const DriverConfig& cfg) {
  if (!cfg.valid()) throw InputError("invalid driver configuration");
  const std::vector<Detection> input =
      cfg.confidence_blind ? strip_confidences(detections) : detections;
  TrackletGraph g = TrackletGraph::build(input, cfg.graph);
  PathEngine engine;
  DriverStats stats;
  const Rng root(cfg.seed);
  int dir = 1;
  for (int l = 1; l <= cfg.max_iter; ++l) {
    ValidationParams vp = cfg.validation;
    vp.k1 = cfg.relax.k1_at(l);
    vp.k2 = cfg.relax.k2_at(l);
    detail::run_scan(g, engine, cfg, dir, root.substream(static_cast<uint64_t>(l)), std::nullopt,
                     [&](NodeId) { return vp; }, stats);
    dir = -dir;
  }
  return {g.trajectories(), std::move(stats)};
}

// Incremental driver: the graph grows frame by frame and each frame triggers
// one scan, recent nodes first. Keys whose observation window still touches
// the sliding window [now - delta_slide, now] are tested with the
// conservative start-of-ramp bounds; older keys get the relaxed end values.
class IncrementalTracker {
 public:
  explicit IncrementalTracker(DriverConfig cfg) : cfg_(std::move(cfg)), graph_(cfg_.graph) {
    if (!cfg_.valid()) throw InputError("invalid driver configuration");
  }

  void observe(int frame, const std::vector<Detection>& frame_detections) {
    for (const Detection& d : frame_detections)
      if (d.t != frame) throw InputError("observe: detection frame mismatch");
    graph_.increment(cfg_.confidence_blind ? strip_confidences(frame_detections)
                                           : frame_detections);
    now_ = frame;
    scan();
  }

  // Call once after the stream ends: keeps scanning with the window sliding
  // past the data so the tail of the sequence also reaches the relaxed
  // bounds. Flush scans loosen the out-of-window values along the relaxation
  // schedule instead of jumping straight to the end values. Stops when both
  // directions pass without effect.
  void finish() {
    int idle = 0;
    const int cap = cfg_.flush_scans >= 0 ? cfg_.flush_scans : auto_flush_cap();
    for (int i = 0; i < cap && idle < 2; ++i) {
      ++now_;
      flush_scan_ = i + 1;
      const long before_validations = stats.validations;
      const long before_conservative = stats.conservative_tests;
      scan();
      const bool idle_scan = stats.validations == before_validations &&
                             stats.conservative_tests == before_conservative;
      const bool ramp_done =
          flush_scan_ >= std::max(cfg_.relax.k1_iters, cfg_.relax.k2_iters);
      idle = idle_scan && ramp_done ? idle + 1 : 0;
    }
  }

  std::vector<Trajectory> snapshot() const { return graph_.trajectories(); }
  const TrackletGraph& graph() const { return graph_; }
  int current_frame() const { return now_; }

  DriverStats stats;

 private:
  int auto_flush_cap() const {
    double total_len = 0;
    for (NodeId id : graph_.alive_nodes()) total_len += graph_.tracklet(id).length();
    return cfg_.delta_slide + static_cast<int>(cfg_.validation.kappa * total_len) + 4;
  }

  void scan() {
    ++scan_index_;
    detail::run_scan(graph_, engine_, cfg_, dir_,
                     Rng(cfg_.seed).substream(static_cast<uint64_t>(scan_index_)), now_,
                     [&](NodeId key) { return params_for(key); }, stats);
    dir_ = -dir_;
  }

  ValidationParams params_for(NodeId key) {
    const WindowBounds wb = hypothesis_window(graph_.tracklet(key), dir_, cfg_.validation);
    const bool entirely_old = wb.t_hi < now_ - cfg_.delta_slide;
    ValidationParams vp = cfg_.validation;
    if (entirely_old) {
      vp.k1 = flush_scan_ > 0 ? cfg_.relax.k1_at(flush_scan_) : cfg_.relax.k1_end;
      vp.k2 = flush_scan_ > 0 ? cfg_.relax.k2_at(flush_scan_) : cfg_.relax.k2_end;
      ++stats.relaxed_tests;
    } else {
      vp.k1 = cfg_.relax.k1_start;
      vp.k2 = cfg_.relax.k2_start;
      ++stats.conservative_tests;
    }
    return vp;
  }

  DriverConfig cfg_;
  TrackletGraph graph_;
  PathEngine engine_;
  int now_ = -1;
  int dir_ = 1;
  int scan_index_ = 0;
  int flush_scan_ = 0;
};

// Convenience wrapper over the incremental tracker for a finite stream.
inline TrackResult run_incremental(const std::vector<Detection>& detections,
                                   const DriverConfig& cfg) {
  std::map<int, std::vector<Detection>> by_frame;
  for (const Detection& d : detections) by_frame[d.t].push_back(d);
  IncrementalTracker tracker(cfg);
  for (auto& [frame, dets] : by_frame) tracker.observe(frame, dets);
  tracker.finish();
  return {tracker.snapshot(), tracker.stats};
}

}  // namespace iht
