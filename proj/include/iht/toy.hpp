#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "iht/rng.hpp"
#include "iht/types.hpp"

namespace iht {

inline constexpr double kPi = 3.14159265358979323846;

// Three 1-D targets on sinusoidal orbits, observed for 11 frames. Each target
// carries one scalar appearance feature (an angle in degrees) whose noise
// level follows a two-state automaton: reliable (sigma_low, conf_reliable)
// and unreliable (sigma_high, conf_unreliable). State 1 -> 2 with probability
// p, state 2 -> 1 with probability q.
struct ToyConfig {
  double p = 0.5;
  double q = 0.5;
  double mu[3] = {0.0, 120.0, 240.0};
  double sigma_low = 10.0;
  double sigma_high = 100.0;
  double conf_reliable = 0.8;
  double conf_unreliable = 0.1;
  int horizon = 11;
  uint64_t seed = 0;

  bool valid() const { return p >= 0.0 && p < 1.0 && q >= 0.0 && q <= 1.0 && horizon >= 1; }
};

struct BenchData {
  std::vector<Detection> detections;     // sorted by (frame, target index)
  std::vector<Trajectory> ground_truth;  // one per target, id = target index
};

namespace detail {

// Per-target appearance trace: feature value + confidence per frame. The
// automaton starts in the reliable state and evolves once per frame
// thereafter. Each target draws from its own substream.
inline void appearance_trace(Rng rng, double mu, const ToyConfig& cfg, int frames,
                             std::vector<double>& f, std::vector<double>& c) {
  f.resize(frames);
  c.resize(frames);
  int state = 1;
  for (int k = 0; k < frames; ++k) {
    if (k > 0) {
      const double u = rng.uniform();
      if (state == 1 && u < cfg.p) state = 2;
      else if (state == 2 && u < cfg.q) state = 1;
    }
    const double sigma = state == 1 ? cfg.sigma_low : cfg.sigma_high;
    f[k] = rng.gaussian(mu, sigma);
    c[k] = state == 1 ? cfg.conf_reliable : cfg.conf_unreliable;
  }
}

}  // namespace detail

inline double toy_position(int target, int k) {
  switch (target) {
    case 0: return 50.0 * std::sin(2.0 * kPi * k / 10.0);
    case 1: return 50.0 * std::cos(2.0 * kPi * k / 10.0);
    default: return -20.0 - 50.0 * std::sin(2.0 * kPi * k / 8.0);
  }
}

inline BenchData generate_toy(const ToyConfig& cfg) {
  BenchData out;
  const Rng root(cfg.seed);
  std::vector<double> f, c;
  out.ground_truth.resize(3);
  std::vector<std::vector<Detection>> per_target(3);
  for (int i = 0; i < 3; ++i) {
    out.ground_truth[i].id = i;
    detail::appearance_trace(root.substream(static_cast<uint64_t>(i)), cfg.mu[i], cfg,
                             cfg.horizon, f, c);
    for (int k = 0; k < cfg.horizon; ++k) {
      Detection d;
      d.t = k;
      d.y = {toy_position(i, k), 0.0};
      d.features = {f[k]};
      d.confidences = {c[k]};
      per_target[i].push_back(d);
      out.ground_truth[i].detections.push_back(d);
    }
  }
  for (int k = 0; k < cfg.horizon; ++k)
    for (int i = 0; i < 3; ++i) out.detections.push_back(per_target[i][k]);
  return out;
}

// Dissimilarity between two angular features (degrees), range [0, 1],
// symmetric, period 180.
inline double toy_appearance_dissimilarity(double f_i, double f_j) {
  return 1.0 - std::abs(std::cos(kPi * (f_j - f_i) / 180.0));
}

// Longer 2-D benchmark: `targets` Lissajous orbits observed for `frames`
// frames, with the same two-state confidence automaton as the toy. Occlusion
// episodes are modelled by longer dwell times in the unreliable state.
struct SynthConfig {
  int frames = 500;
  int targets = 8;
  double p = 0.12;
  double q = 0.3;
  double sigma_low = 10.0;
  double sigma_high = 100.0;
  double conf_reliable = 0.8;
  double conf_unreliable = 0.1;
  uint64_t seed = 0;
};

inline BenchData generate_synth(const SynthConfig& cfg) {
  BenchData out;
  const Rng root(cfg.seed);
  out.ground_truth.resize(cfg.targets);
  std::vector<std::vector<Detection>> per_target(cfg.targets);
  std::vector<double> f, c;
  for (int i = 0; i < cfg.targets; ++i) {
    Rng motion = root.substream(2 * static_cast<uint64_t>(i));
    const double cx = motion.uniform(-60.0, 60.0);
    const double cy = motion.uniform(-60.0, 60.0);
    const double ax = motion.uniform(40.0, 120.0);
    const double ay = motion.uniform(40.0, 120.0);
    const double wx = motion.uniform(2.0 * kPi / 300.0, 2.0 * kPi / 80.0);
    const double wy = motion.uniform(2.0 * kPi / 300.0, 2.0 * kPi / 80.0);
    const double px = motion.uniform(0.0, 2.0 * kPi);
    const double py = motion.uniform(0.0, 2.0 * kPi);
    const double mu = 360.0 * i / cfg.targets;

    ToyConfig trace_cfg;
    trace_cfg.p = cfg.p;
    trace_cfg.q = cfg.q;
    trace_cfg.sigma_low = cfg.sigma_low;
    trace_cfg.sigma_high = cfg.sigma_high;
    trace_cfg.conf_reliable = cfg.conf_reliable;
    trace_cfg.conf_unreliable = cfg.conf_unreliable;
    detail::appearance_trace(root.substream(2 * static_cast<uint64_t>(i) + 1), mu, trace_cfg,
                             cfg.frames, f, c);

    out.ground_truth[i].id = i;
    for (int k = 0; k < cfg.frames; ++k) {
      Detection d;
      d.t = k;
      d.y = {cx + ax * std::sin(wx * k + px), cy + ay * std::cos(wy * k + py)};
      d.features = {f[k]};
      d.confidences = {c[k]};
      per_target[i].push_back(d);
      out.ground_truth[i].detections.push_back(d);
    }
  }
  for (int k = 0; k < cfg.frames; ++k)
    for (int i = 0; i < cfg.targets; ++i) out.detections.push_back(per_target[i][k]);
  return out;
}

}  // namespace iht
