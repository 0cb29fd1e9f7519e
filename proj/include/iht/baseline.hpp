#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "iht/hypothesis.hpp"
#include "iht/types.hpp"

namespace iht {

// Pairwise detection costs for the conventional consecutive-frame trackers:
// spatial displacement plus confidence-weighted appearance dissimilarity with
// a fixed fallback cost when either feature is unreliable.
struct BaselineCosts {
  double w_fix = 10.0;
  double lambda = 1.0;
  AppearanceParams::Metric metric = AppearanceParams::Metric::angular_degrees;
  bool confidence_blind = false;

  double feature_distance(double a, double b) const {
    return metric == AppearanceParams::Metric::l1 ? std::abs(a - b)
                                                  : toy_appearance_dissimilarity(a, b);
  }

  double spatial(const Detection& u, const Detection& v) const { return distance(u.y, v.y); }

  double appearance(const Detection& u, const Detection& v) const {
    const size_t n = std::min(u.features.size(), v.features.size());
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double cc =
          confidence_blind ? 1.0 : u.confidences[i] * v.confidences[i];
      s += cc * lambda * feature_distance(u.features[i], v.features[i]) + (1.0 - cc) * w_fix;
    }
    return s;
  }

  double total(const Detection& u, const Detection& v) const {
    return spatial(u, v) + appearance(u, v);
  }
};

struct KspResult {
  std::vector<Trajectory> tracks;
  double total_cost = 0.0;
  bool shortfall = false;  // fewer than k disjoint paths existed
};

// Conventional baseline: k node-disjoint source-to-sink paths extracted
// greedily by successive shortest paths over the consecutive-frame layered
// graph, deleting the nodes of each extracted path.
inline KspResult ksp_track(const std::vector<Detection>& detections, int k,
                           const BaselineCosts& costs) {
  if (k < 1) throw InputError("ksp_track: k must be >= 1");
  KspResult result;
  if (detections.empty()) {
    result.shortfall = k > 0;
    return result;
  }

  std::map<int, std::vector<size_t>> by_frame;
  for (size_t i = 0; i < detections.size(); ++i) by_frame[detections[i].t].push_back(i);
  std::vector<std::vector<size_t>> layers;
  layers.reserve(by_frame.size());
  for (auto& [t, ids] : by_frame) layers.push_back(ids);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<char> used(detections.size(), 0);

  for (int path_index = 0; path_index < k; ++path_index) {
    std::vector<double> dist(detections.size(), kInf);
    std::vector<int64_t> pred(detections.size(), -1);
    for (size_t i : layers.front())
      if (!used[i]) dist[i] = 0.0;
    for (size_t l = 0; l + 1 < layers.size(); ++l) {
      for (size_t u : layers[l]) {
        if (used[u] || dist[u] >= kInf) continue;
        for (size_t v : layers[l + 1]) {
          if (used[v]) continue;
          const double cand = dist[u] + costs.total(detections[u], detections[v]);
          if (cand < dist[v] - kCostEps ||
              (cand < dist[v] + kCostEps && pred[v] >= 0 &&
               static_cast<int64_t>(u) < pred[v])) {
            dist[v] = std::min(dist[v], cand);
            pred[v] = static_cast<int64_t>(u);
          }
        }
      }
    }
    int64_t best = -1;
    for (size_t i : layers.back()) {
      if (used[i] || dist[i] >= kInf) continue;
      if (best < 0 || dist[i] < dist[static_cast<size_t>(best)] - kCostEps ||
          (dist[i] < dist[static_cast<size_t>(best)] + kCostEps &&
           static_cast<int64_t>(i) < best))
        best = static_cast<int64_t>(i);
    }
    if (best < 0) {
      result.shortfall = true;
      break;
    }
    Trajectory track;
    track.id = path_index;
    result.total_cost += dist[static_cast<size_t>(best)];
    for (int64_t cur = best; cur >= 0; cur = pred[static_cast<size_t>(cur)]) {
      used[static_cast<size_t>(cur)] = 1;
      track.detections.push_back(detections[static_cast<size_t>(cur)]);
    }
    std::reverse(track.detections.begin(), track.detections.end());
    result.tracks.push_back(std::move(track));
  }
  return result;
}

// Cost models for the exhaustive partition search. `consecutive` charges each
// track only between temporally adjacent members; `all_pairs` adds the
// reliability-weighted appearance term for every remaining causal pair, so
// confidently observed features matter at any temporal distance.
enum class PartitionCostModel { consecutive, all_pairs };

inline double partition_cost(const std::vector<Trajectory>& tracks, PartitionCostModel model,
                             const BaselineCosts& costs, double lambda_pair) {
  double total = 0.0;
  for (const Trajectory& track : tracks) {
    const auto& dets = track.detections;
    for (size_t i = 0; i + 1 < dets.size(); ++i) total += costs.total(dets[i], dets[i + 1]);
    if (model == PartitionCostModel::all_pairs) {
      for (size_t i = 0; i + 2 < dets.size(); ++i) {
        for (size_t j = i + 2; j < dets.size(); ++j) {
          const size_t n = std::min(dets[i].features.size(), dets[j].features.size());
          for (size_t fi = 0; fi < n; ++fi) {
            const double cc = costs.confidence_blind
                                  ? 1.0
                                  : dets[i].confidences[fi] * dets[j].confidences[fi];
            total += lambda_pair * cc *
                     costs.feature_distance(dets[i].features[fi], dets[j].features[fi]);
          }
        }
      }
    }
  }
  return total;
}

struct OracleResult {
  std::vector<Trajectory> tracks;
  double cost = 0.0;
};

// Exhaustive minimum-cost partition into k tracks with at most one detection
// per frame per track. Only feasible for tiny instances; refuses anything
// above 18 detections.
inline OracleResult brute_force_partition(const std::vector<Detection>& detections, int k,
                                          PartitionCostModel model, const BaselineCosts& costs,
                                          double lambda_pair = 1.0) {
  if (detections.size() > 18) throw InputError("brute_force_partition: instance too large");
  if (k < 1) throw InputError("brute_force_partition: k must be >= 1");

  std::map<int, std::vector<size_t>> by_frame;
  for (size_t i = 0; i < detections.size(); ++i) by_frame[detections[i].t].push_back(i);
  std::vector<std::vector<size_t>> frames;
  for (auto& [t, ids] : by_frame) {
    if (static_cast<int>(ids.size()) > k)
      throw InputError("brute_force_partition: more detections than tracks in one frame");
    frames.push_back(ids);
  }

  std::vector<int> label(detections.size(), -1);
  std::vector<Trajectory> current(static_cast<size_t>(k));
  OracleResult best;
  best.cost = std::numeric_limits<double>::infinity();

  auto evaluate_leaf = [&]() {
    for (int i = 0; i < k; ++i) {
      current[static_cast<size_t>(i)].id = i;
      current[static_cast<size_t>(i)].detections.clear();
    }
    for (const auto& frame : frames)
      for (size_t det : frame)
        current[static_cast<size_t>(label[det])].detections.push_back(detections[det]);
    const double c = partition_cost(current, model, costs, lambda_pair);
    if (c < best.cost) {
      best.cost = c;
      best.tracks = current;
    }
  };

  // Injective labelling per frame, recursed frame by frame.
  std::vector<char> taken(static_cast<size_t>(k), 0);
  auto assign_frame = [&](auto&& self, size_t frame_idx, size_t pos) -> void {
    if (frame_idx == frames.size()) {
      evaluate_leaf();
      return;
    }
    const auto& frame = frames[frame_idx];
    if (pos == frame.size()) {
      std::fill(taken.begin(), taken.end(), 0);
      self(self, frame_idx + 1, 0);
      for (size_t det : frame) taken[static_cast<size_t>(label[det])] = 1;
      return;
    }
    for (int lab = 0; lab < k; ++lab) {
      if (taken[static_cast<size_t>(lab)]) continue;
      taken[static_cast<size_t>(lab)] = 1;
      label[frame[pos]] = lab;
      self(self, frame_idx, pos + 1);
      taken[static_cast<size_t>(lab)] = 0;
    }
  };
  if (frames.empty()) {
    best.cost = 0.0;
    best.tracks.assign(static_cast<size_t>(k), Trajectory{});
  } else {
    assign_frame(assign_frame, 0, 0);
  }
  for (size_t i = 0; i < best.tracks.size(); ++i) best.tracks[i].id = static_cast<int>(i);
  return best;
}

}  // namespace iht
