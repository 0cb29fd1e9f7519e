#pragma once

#include <cstddef>
#include <vector>

#include "iht/types.hpp"

namespace iht {

// A time-ordered chain of detections treated as one graph node. Appearance is
// aggregated as confidence-weighted feature averages together with the raw
// confidence mass, so merging tracklets and recomputing from scratch agree.
struct Tracklet {
  std::vector<Detection> detections;
  int t_start = 0;
  int t_end = 0;
  std::vector<double> mean_features;
  std::vector<double> conf_mass;
  Point start_velocity;
  Point end_velocity;
  // Cost of traversing the chain end to end. Zero for a single detection;
  // merged nodes carry the validated path cost so they cannot act as free
  // short-cuts.
  double inner_cost = 0.0;

  int length() const { return static_cast<int>(detections.size()); }
  const Point& start_position() const { return detections.front().y; }
  const Point& end_position() const { return detections.back().y; }

  // Confidence-weighted feature average and mass over [first, last).
  static void aggregate(const std::vector<Detection>& dets, size_t first, size_t last,
                        std::vector<double>& mean, std::vector<double>& mass) {
    const size_t n = dets.empty() ? 0 : dets.front().features.size();
    mean.assign(n, 0.0);
    mass.assign(n, 0.0);
    for (size_t k = first; k < last; ++k) {
      for (size_t i = 0; i < n; ++i) {
        mean[i] += dets[k].confidences[i] * dets[k].features[i];
        mass[i] += dets[k].confidences[i];
      }
    }
    for (size_t i = 0; i < n; ++i) mean[i] = mass[i] > 0.0 ? mean[i] / mass[i] : 0.0;
  }

  // Recomputes every derived field from the detection chain; inner_cost is
  // path history and is left untouched.
  void refresh() {
    if (detections.empty()) throw InvariantError("tracklet with no detections");
    t_start = detections.front().t;
    t_end = detections.back().t;
    aggregate(detections, 0, detections.size(), mean_features, conf_mass);
    const size_t n = detections.size();
    if (n == 1) {
      start_velocity = end_velocity = Point{};
    } else {
      const Detection& a0 = detections[0];
      const Detection& a1 = detections[1];
      const Detection& b1 = detections[n - 1];
      const Detection& b0 = detections[n - 2];
      start_velocity = (a1.y - a0.y) * (1.0 / (a1.t - a0.t));
      end_velocity = (b1.y - b0.y) * (1.0 / (b1.t - b0.t));
    }
  }

  static Tracklet from_detection(const Detection& d) {
    Tracklet v;
    v.detections = {d};
    v.refresh();
    return v;
  }

  double total_conf_mass() const {
    double s = 0.0;
    for (double c : conf_mass) s += c;
    return s;
  }
};

}  // namespace iht
