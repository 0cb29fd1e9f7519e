#pragma once

#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "iht/driver.hpp"
#include "iht/io.hpp"

namespace iht {

// Every tracker parameter as a flat key-value config. Defaults are the
// reference working point (tau_max=120, gamma=3, kappa=5, C in [20,100],
// K1=5, K2=1/3). Files use `key value` (or `key = value`) lines; any key can
// be overridden by an IHT_<KEY> environment variable, and CLI flags override
// both.
struct Config {
  int tau_max = 120;
  double gamma = 3.0;
  bool use_velocity = true;
  double kappa = 5.0;
  double c_min = 20.0;
  double c_max = 100.0;
  std::vector<double> lambda{1.0};
  std::vector<double> w_fix{5.0};
  std::string feature_metric = "l1";  // l1 | angular
  std::string reliability = "ramp";   // ramp | mean_confidence
  int extremity_window = 0;
  double k1_start = 5.0, k1_end = 5.0;
  int k1_iters = 1;
  double k2_start = 1.0 / 3.0, k2_end = 1.0 / 3.0;
  int k2_iters = 1;
  int max_iter = 60;
  std::string schedule = "longest_first";  // longest_first | random | confidence_first | recency
  std::string validation = "conservative";  // conservative | always
  std::string window_mode = "adaptive";     // adaptive | fixed
  double fixed_window = 500.0;
  int delta_slide = 200;
  int flush_scans = -1;
  double match_radius = 10.0;
  uint64_t seed = 0;
  bool confidence_blind = false;

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k = {
        "tau_max",    "gamma",      "use_velocity",     "kappa",
        "c_min",      "c_max",      "lambda",           "w_fix",
        "feature_metric",           "reliability",      "extremity_window", "k1_start",
        "k1_end",     "k1_iters",   "k2_start",         "k2_end",
        "k2_iters",   "max_iter",   "schedule",         "validation",
        "window_mode", "fixed_window", "delta_slide",   "flush_scans",
        "match_radius", "seed",     "confidence_blind"};
    return k;
  }

  void set(const std::string& key, const std::string& value) {
    const auto num = [&]() -> double {
      std::istringstream s(value);
      double v;
      if (!(s >> v)) throw InputError("config: numeric value expected for " + key);
      return v;
    };
    const auto flag = [&]() -> bool {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw InputError("config: boolean expected for " + key);
    };
    const auto list = [&]() {
      std::vector<double> vs;
      std::string item;
      std::istringstream s(value);
      while (std::getline(s, item, ',')) {
        std::istringstream e(item);
        double v;
        if (!(e >> v)) throw InputError("config: numeric list expected for " + key);
        vs.push_back(v);
      }
      if (vs.empty()) throw InputError("config: empty list for " + key);
      return vs;
    };

    if (key == "tau_max") tau_max = static_cast<int>(num());
    else if (key == "gamma") gamma = num();
    else if (key == "use_velocity") use_velocity = flag();
    else if (key == "kappa") kappa = num();
    else if (key == "c_min") c_min = num();
    else if (key == "c_max") c_max = num();
    else if (key == "lambda") lambda = list();
    else if (key == "w_fix") w_fix = list();
    else if (key == "feature_metric") feature_metric = value;
    else if (key == "reliability") reliability = value;
    else if (key == "extremity_window") extremity_window = static_cast<int>(num());
    else if (key == "k1_start") k1_start = num();
    else if (key == "k1_end") k1_end = num();
    else if (key == "k1_iters") k1_iters = static_cast<int>(num());
    else if (key == "k2_start") k2_start = num();
    else if (key == "k2_end") k2_end = num();
    else if (key == "k2_iters") k2_iters = static_cast<int>(num());
    else if (key == "max_iter") max_iter = static_cast<int>(num());
    else if (key == "schedule") schedule = value;
    else if (key == "validation") validation = value;
    else if (key == "window_mode") window_mode = value;
    else if (key == "fixed_window") fixed_window = num();
    else if (key == "delta_slide") delta_slide = static_cast<int>(num());
    else if (key == "flush_scans") flush_scans = static_cast<int>(num());
    else if (key == "match_radius") match_radius = num();
    else if (key == "seed") seed = static_cast<uint64_t>(num());
    else if (key == "confidence_blind") confidence_blind = flag();
    // Shorthands: fix a ramp to a constant value.
    else if (key == "k1") { k1_start = k1_end = num(); k1_iters = 1; }
    else if (key == "k2") { k2_start = k2_end = num(); k2_iters = 1; }
    else throw InputError("config: unknown key '" + key + "'");
  }

  std::string get(const std::string& key) const {
    const auto join = [](const std::vector<double>& vs) {
      std::string s;
      for (size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + fmt_double(vs[i]);
      return s;
    };
    if (key == "tau_max") return std::to_string(tau_max);
    if (key == "gamma") return fmt_double(gamma);
    if (key == "use_velocity") return use_velocity ? "true" : "false";
    if (key == "kappa") return fmt_double(kappa);
    if (key == "c_min") return fmt_double(c_min);
    if (key == "c_max") return fmt_double(c_max);
    if (key == "lambda") return join(lambda);
    if (key == "w_fix") return join(w_fix);
    if (key == "feature_metric") return feature_metric;
    if (key == "reliability") return reliability;
    if (key == "extremity_window") return std::to_string(extremity_window);
    if (key == "k1_start") return fmt_double(k1_start);
    if (key == "k1_end") return fmt_double(k1_end);
    if (key == "k1_iters") return std::to_string(k1_iters);
    if (key == "k2_start") return fmt_double(k2_start);
    if (key == "k2_end") return fmt_double(k2_end);
    if (key == "k2_iters") return std::to_string(k2_iters);
    if (key == "max_iter") return std::to_string(max_iter);
    if (key == "schedule") return schedule;
    if (key == "validation") return validation;
    if (key == "window_mode") return window_mode;
    if (key == "fixed_window") return fmt_double(fixed_window);
    if (key == "delta_slide") return std::to_string(delta_slide);
    if (key == "flush_scans") return std::to_string(flush_scans);
    if (key == "match_radius") return fmt_double(match_radius);
    if (key == "seed") return std::to_string(seed);
    if (key == "confidence_blind") return confidence_blind ? "true" : "false";
    throw InputError("config: unknown key '" + key + "'");
  }

  void load_stream(std::istream& in) {
    std::istringstream line;
    while (detail::next_record(in, line)) {
      std::string key, value, extra;
      line >> key;
      line >> value;
      if (value == "=") line >> value;
      if (value.empty()) throw InputError("config: missing value for '" + key + "'");
      set(key, value);
    }
  }

  static Config from_file(const std::string& path) {
    Config cfg;
    auto in = open_input(path);
    cfg.load_stream(in);
    return cfg;
  }

  // IHT_<KEY> environment overrides, applied over file values.
  void apply_env() {
    for (const std::string& key : keys()) {
      std::string env_name = "IHT_";
      for (char c : key) env_name += static_cast<char>(std::toupper(c));
      if (const char* v = std::getenv(env_name.c_str())) set(key, v);
    }
  }

  std::string serialize() const {
    std::string out;
    for (const std::string& key : keys()) out += key + " " + get(key) + "\n";
    return out;
  }

  DriverConfig driver_config() const {
    DriverConfig d;
    d.graph.tau_max = tau_max;
    d.graph.gamma = gamma;
    d.graph.use_velocity = use_velocity;
    d.appearance.lambda = lambda;
    d.appearance.w_fix = w_fix;
    d.appearance.c_min = c_min;
    d.appearance.c_max = c_max;
    d.appearance.extremity_window = extremity_window;
    if (feature_metric == "l1") d.appearance.metric = AppearanceParams::Metric::l1;
    else if (feature_metric == "angular") d.appearance.metric = AppearanceParams::Metric::angular_degrees;
    else throw InputError("config: feature_metric must be l1 or angular");
    if (reliability == "ramp") d.appearance.reliability_mode = AppearanceParams::Reliability::ramp;
    else if (reliability == "mean_confidence")
      d.appearance.reliability_mode = AppearanceParams::Reliability::mean_confidence;
    else throw InputError("config: reliability must be ramp or mean_confidence");
    d.validation.kappa = kappa;
    d.validation.fixed_window = fixed_window;
    if (window_mode == "adaptive") d.validation.window_mode = ValidationParams::WindowMode::adaptive;
    else if (window_mode == "fixed") d.validation.window_mode = ValidationParams::WindowMode::fixed;
    else throw InputError("config: window_mode must be adaptive or fixed");
    d.relax = {k1_start, k1_end, k1_iters, k2_start, k2_end, k2_iters};
    d.validation.k1 = k1_start;
    d.validation.k2 = k2_start;
    if (schedule == "longest_first") d.policy = SchedulePolicy::longest_first;
    else if (schedule == "random") d.policy = SchedulePolicy::random;
    else if (schedule == "confidence_first") d.policy = SchedulePolicy::confidence_first;
    else if (schedule == "recency") d.policy = SchedulePolicy::recency;
    else throw InputError("config: unknown schedule policy '" + schedule + "'");
    if (validation == "conservative") d.validation_mode = ValidationMode::conservative;
    else if (validation == "always") d.validation_mode = ValidationMode::always;
    else throw InputError("config: validation must be conservative or always");
    d.max_iter = max_iter;
    d.delta_slide = delta_slide;
    d.flush_scans = flush_scans;
    d.seed = seed;
    d.confidence_blind = confidence_blind;
    if (!d.valid()) throw InputError("config: invalid parameter combination");
    return d;
  }
};

// Toy working point: consecutive-frame edges, plain displacement costs,
// angular feature metric, reliability equal to raw confidence for single
// detections, and the relaxation ramps sized to the toy cost scale.
inline Config toy_preset() {
  Config c;
  c.tau_max = 1;
  c.gamma = 3.0;
  c.use_velocity = false;
  c.kappa = 2.0;
  c.c_min = 0.0;
  c.c_max = 1.0;
  c.lambda = {250.0};
  c.w_fix = {10.0};
  c.feature_metric = "angular";
  c.k1_start = 15.0;
  c.k1_end = 60.0;
  c.k1_iters = 50;
  c.k2_start = 0.25;
  c.k2_end = 1.0 / 1.1;
  c.k2_iters = 40;
  c.max_iter = 60;
  c.delta_slide = 12;
  c.match_radius = 10.0;
  return c;
}

}  // namespace iht
