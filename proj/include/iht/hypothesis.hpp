#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "iht/path.hpp"
#include "iht/toy.hpp"
#include "iht/tracklet.hpp"

namespace iht {

struct AppearanceParams {
  // Per-feature weights; a single entry broadcasts to every feature.
  std::vector<double> lambda{1.0};
  std::vector<double> w_fix{5.0};
  // Reliability ramp thresholds on accumulated confidence mass.
  double c_min = 20.0;
  double c_max = 100.0;
  // ramp: clamped-linear in the accumulated mass (the general setting).
  // mean_confidence: average member confidence, so a single detection's
  // reliability is its raw confidence value and piles of low-confidence
  // detections never become trusted (the toy-benchmark setting).
  enum class Reliability { ramp, mean_confidence } reliability_mode = Reliability::ramp;
  enum class Metric { l1, angular_degrees } metric = Metric::l1;
  // When > 0, dissimilarity against a key-node uses a separate feature
  // average over this many detections at the facing extremity instead of the
  // whole-tracklet average.
  int extremity_window = 0;

  double lambda_for(size_t i) const { return lambda[i < lambda.size() ? i : 0]; }
  double w_fix_for(size_t i) const { return w_fix[i < w_fix.size() ? i : 0]; }

  double feature_distance(double a, double b) const {
    return metric == Metric::l1 ? std::abs(a - b) : toy_appearance_dissimilarity(a, b);
  }

  bool valid() const { return c_min < c_max && !lambda.empty() && !w_fix.empty(); }
};

// Clamped-linear map from accumulated confidence mass to [0, 1].
inline double reliability(double conf_mass, const AppearanceParams& p) {
  if (conf_mass <= p.c_min) return 0.0;
  if (conf_mass >= p.c_max) return 1.0;
  return (conf_mass - p.c_min) / (p.c_max - p.c_min);
}

inline double reliability(double conf_mass, int member_count, const AppearanceParams& p) {
  if (p.reliability_mode == AppearanceParams::Reliability::mean_confidence) {
    if (member_count <= 0) return 0.0;
    return std::clamp(conf_mass / member_count, 0.0, 1.0);
  }
  return reliability(conf_mass, p);
}

namespace detail {

// Feature average and mass of one extremity (head = first detections,
// tail = last). Falls back to the cached whole-tracklet aggregates when the
// extremity mode is off.
struct AppearanceSide {
  std::vector<double> mean;
  std::vector<double> mass;
  int members = 0;
};

inline AppearanceSide side_appearance(const Tracklet& v, bool head, const AppearanceParams& p) {
  AppearanceSide s;
  if (p.extremity_window <= 0 || v.length() <= p.extremity_window) {
    s.mean = v.mean_features;
    s.mass = v.conf_mass;
    s.members = v.length();
    return s;
  }
  const size_t n = v.detections.size();
  const size_t k = static_cast<size_t>(p.extremity_window);
  const size_t first = head ? 0 : n - k;
  const size_t last = head ? k : n;
  Tracklet::aggregate(v.detections, first, last, s.mean, s.mass);
  s.members = static_cast<int>(last - first);
  return s;
}

}  // namespace detail

// Transient cost increment for traversing node v under the hypothesis that
// the target looks like the key-node. Reliable disagreement is charged
// proportionally to the feature distance; unreliable comparisons fall back
// to the fixed cost so featureless nodes are never free.
inline double dissimilarity_increment(const Tracklet& key, const Tracklet& v,
                                      const AppearanceParams& p) {
  const bool key_first = key.t_end <= v.t_start;
  const detail::AppearanceSide ka = detail::side_appearance(key, !key_first, p);
  const detail::AppearanceSide va = detail::side_appearance(v, key_first, p);
  const size_t n = std::min(ka.mean.size(), va.mean.size());
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = reliability(ka.mass[i], ka.members, p) * reliability(va.mass[i], va.members, p);
    d += a * p.lambda_for(i) * p.feature_distance(ka.mean[i], va.mean[i]) +
         (1.0 - a) * p.w_fix_for(i);
  }
  return d;
}

struct ValidationParams {
  double k1 = 5.0;          // absolute bound: cost(best) < k1 * |window|
  double k2 = 1.0 / 3.0;    // ratio bound: cost(best) / cost(second) < k2
  double kappa = 5.0;       // window size per aggregated detection
  enum class WindowMode { adaptive, fixed } window_mode = WindowMode::adaptive;
  double fixed_window = 500.0;

  bool valid() const {
    return k1 > 0.0 && k2 > 0.0 && k2 <= 1.0 && kappa > 0.0 && fixed_window >= 1.0;
  }
};

enum class ValidationMode { conservative, always };

struct HypothesisResult {
  enum class Verdict { validated, rejected } verdict = Verdict::rejected;
  std::vector<NodeId> path;  // [key] unless validated
  double best_cost = std::numeric_limits<double>::quiet_NaN();
  double second_cost = std::numeric_limits<double>::quiet_NaN();
  double t_lo = 0.0, t_hi = 0.0;
  int direction = 1;

  bool validated() const { return verdict == Verdict::validated; }
};

struct WindowBounds {
  double t_lo, t_hi, size;
};

inline WindowBounds hypothesis_window(const Tracklet& key, int direction,
                                      const ValidationParams& vp) {
  const double size = vp.window_mode == ValidationParams::WindowMode::adaptive
                          ? vp.kappa * key.length()
                          : vp.fixed_window;
  if (direction >= 0) return {static_cast<double>(key.t_end), key.t_end + size, size};
  return {key.t_start - size, static_cast<double>(key.t_start), size};
}

// One key-node hypothesis: overlay appearance dissimilarity on the windowed
// view, find best/second-best paths to the window frontier, and accept only
// when the best path is unambiguous in both directions. On acceptance the
// returned chain may be truncated to the prefix shared with every
// cheap partially-overlapping rival.
inline HypothesisResult hypothesis_test(const TrackletGraph& g, PathEngine& engine, NodeId key,
                                        int direction, const ValidationParams& vp,
                                        const AppearanceParams& ap,
                                        ValidationMode mode = ValidationMode::conservative) {
  if (!g.alive(key)) throw InvariantError("hypothesis_test: key not in graph");
  HypothesisResult res;
  res.path = {key};
  res.direction = direction;
  const Tracklet& key_tracklet = g.tracklet(key);
  const WindowBounds wb = hypothesis_window(key_tracklet, direction, vp);
  res.t_lo = wb.t_lo;
  res.t_hi = wb.t_hi;

  // Reversing the backward-mode view gives a single source-to-frontier code
  // path with the key always at the source.
  WindowView view = make_window(g, wb.t_lo, wb.t_hi, direction < 0);
  if (view.size() < 2) return res;

  PathQuery query;
  query.source = key;
  query.sinks = frontier_sinks(view, key);
  query.cost_hook = [&](NodeId v) { return dissimilarity_increment(key_tracklet, g.tracklet(v), ap); };
  if (query.sinks.empty()) return res;

  const PathResult fwd = engine.shortest_paths(view, query);
  if (!fwd.best || fwd.best->nodes.size() < 2) return res;
  res.best_cost = fwd.best->cost;
  if (fwd.second_best) res.second_cost = fwd.second_best->cost;

  if (mode == ValidationMode::always) {
    res.verdict = HypothesisResult::Verdict::validated;
    res.path = fwd.best->nodes;
    if (direction < 0) std::reverse(res.path.begin(), res.path.end());
    return res;
  }

  const auto unambiguous = [&](const Path& best, const std::optional<Path>& second) {
    if (best.cost >= vp.k1 * wb.size) return false;
    if (!second) return true;  // uncontested
    if (second->cost <= kCostEps) return false;  // zero-cost rival: maximal ambiguity
    return best.cost / second->cost < vp.k2;
  };
  if (!unambiguous(*fwd.best, fwd.second_best)) return res;

  // Reverse check: from the far end of the best path, the same test must
  // lead back to the key.
  const NodeId far_end = fwd.best->nodes.back();
  WindowView back_view = reverse(view);
  PathQuery back_query;
  back_query.source = far_end;
  back_query.sinks = frontier_sinks(back_view, far_end);
  back_query.cost_hook = query.cost_hook;
  const PathResult bwd = engine.shortest_paths(back_view, back_query);
  if (!bwd.best || bwd.best->nodes.back() != key) return res;
  if (!unambiguous(*bwd.best, bwd.second_best)) return res;

  // Rivals within the ratio bound that share a prefix with the best path
  // leave only that prefix safe to aggregate.
  std::vector<NodeId> accepted = fwd.best->nodes;
  const double threshold = fwd.best->cost / vp.k2;
  const std::vector<Path> rivals = engine.competitive_forks(view, query, *fwd.best, threshold);
  accepted = shared_prefix(accepted, rivals);
  if (accepted.size() < 2) return res;

  res.verdict = HypothesisResult::Verdict::validated;
  res.path = std::move(accepted);
  if (direction < 0) std::reverse(res.path.begin(), res.path.end());
  return res;
}

}  // namespace iht
