#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iht {

// World-plane position. 1-D data keeps y == 0; the file formats record the
// actual dimensionality so round-trips stay exact.
struct Point {
  double x = 0.0;
  double y = 0.0;

  Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
  Point operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

// One candidate target at one frame. `features[i]` is meaningful only to the
// extent `confidences[i]` says it is; confidence 0 means the feature is
// missing entirely.
struct Detection {
  int t = 0;
  Point y;
  std::vector<double> features;
  std::vector<double> confidences;
};

// A chain of detections with a stable identity, used both for ground truth
// (id = target) and tracker output (id = track).
struct Trajectory {
  int id = 0;
  std::vector<Detection> detections;
};

// Exit-code taxonomy for the CLI: usage 1, input/format 2, internal 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace iht
