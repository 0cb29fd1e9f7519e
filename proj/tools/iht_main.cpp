// Command-line front end: synthetic dataset generation, tracking runs,
// CLEAR MOT evaluation, and parameter sweeps with CSV export.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iht/baseline.hpp"
#include "iht/bench.hpp"
#include "iht/config.hpp"
#include "iht/driver.hpp"
#include "iht/io.hpp"
#include "iht/mot_eval.hpp"
#include "iht/toy.hpp"

namespace {

using namespace iht;

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct ManifestWriter {
  std::map<std::string, std::string> entries;
  std::vector<std::string> order;

  void put(const std::string& key, const std::string& value) {
    if (entries.emplace(key, value).second) order.push_back(key);
    else entries[key] = value;
  }
  void put_config(const Config& cfg) {
    for (const std::string& key : Config::keys()) put("cfg." + key, cfg.get(key));
  }
  void write(const std::string& path) const {
    auto out = open_output(path);
    out << "manifest\n";
    for (const std::string& key : order) out << key << ' ' << entries.at(key) << '\n';
  }
};

std::map<std::string, std::string> read_manifest(const std::string& path) {
  auto in = open_input(path);
  std::istringstream line;
  if (!detail::next_record(in, line)) throw InputError("empty manifest");
  std::string tag;
  line >> tag;
  if (tag != "manifest") throw InputError("not a manifest file");
  std::map<std::string, std::string> kv;
  while (detail::next_record(in, line)) {
    std::string key, value;
    line >> key >> value;
    kv[key] = value;
  }
  return kv;
}

const std::map<std::string, BenchVariant>& variant_catalog() {
  static const std::map<std::string, BenchVariant> catalog = {
      {"iht", {"iht", BenchVariant::Algo::iht, true}},
      {"iht_blind", {"iht_blind", BenchVariant::Algo::iht, false}},
      {"iht_random",
       {"iht_random", BenchVariant::Algo::iht, true, SchedulePolicy::random}},
      {"iht_confidence",
       {"iht_confidence", BenchVariant::Algo::iht, true, SchedulePolicy::confidence_first}},
      {"iht_always",
       {"iht_always", BenchVariant::Algo::iht, true, SchedulePolicy::longest_first,
        ValidationMode::always}},
      {"iht_incremental",
       {"iht_incremental", BenchVariant::Algo::iht, true, SchedulePolicy::recency,
        ValidationMode::conservative, true}},
      {"ksp", {"ksp", BenchVariant::Algo::ksp, true}},
      {"ksp_blind", {"ksp_blind", BenchVariant::Algo::ksp, false}},
  };
  return catalog;
}

Config load_config(const std::string& path, bool toy_defaults) {
  Config cfg = toy_defaults ? toy_preset() : Config{};
  if (!path.empty()) {
    cfg = Config{};
    auto in = open_input(path);
    cfg.load_stream(in);
  }
  cfg.apply_env();
  return cfg;
}

int cmd_generate_toy(double p, double q, uint64_t seed, int horizon, const std::string& output,
                     const std::string& gt_path) {
  ToyConfig cfg;
  cfg.p = p;
  cfg.q = q;
  cfg.seed = seed;
  cfg.horizon = horizon;
  if (!cfg.valid()) throw UsageError("generate-toy: require 0 <= p < 1 and horizon >= 1");
  const double t0 = now_ms();
  const BenchData data = generate_toy(cfg);
  {
    auto out = open_output(output);
    write_detections(out, data.detections, 1);
  }
  if (!gt_path.empty()) {
    auto out = open_output(gt_path);
    write_ground_truth(out, data.ground_truth, 1);
  }
  ManifestWriter m;
  m.put("command", "generate-toy");
  m.put("p", fmt_double(p));
  m.put("q", fmt_double(q));
  m.put("seed", std::to_string(seed));
  m.put("horizon", std::to_string(horizon));
  m.put("output", output);
  if (!gt_path.empty()) m.put("ground_truth", gt_path);
  m.put("detections", std::to_string(data.detections.size()));
  m.put("wall_ms", fmt_double(now_ms() - t0));
  m.write(output + ".manifest");
  return 0;
}

int cmd_generate_synth(int frames, int targets, double p, double q, uint64_t seed,
                       const std::string& output, const std::string& gt_path) {
  SynthConfig cfg;
  cfg.frames = frames;
  cfg.targets = targets;
  cfg.p = p;
  cfg.q = q;
  cfg.seed = seed;
  if (frames < 1 || targets < 1 || p < 0 || p >= 1)
    throw UsageError("generate-synth: bad frame/target/probability values");
  const double t0 = now_ms();
  const BenchData data = generate_synth(cfg);
  {
    auto out = open_output(output);
    write_detections(out, data.detections, 2);
  }
  if (!gt_path.empty()) {
    auto out = open_output(gt_path);
    write_ground_truth(out, data.ground_truth, 2);
  }
  ManifestWriter m;
  m.put("command", "generate-synth");
  m.put("frames", std::to_string(frames));
  m.put("targets", std::to_string(targets));
  m.put("p", fmt_double(p));
  m.put("q", fmt_double(q));
  m.put("seed", std::to_string(seed));
  m.put("output", output);
  if (!gt_path.empty()) m.put("ground_truth", gt_path);
  m.put("detections", std::to_string(data.detections.size()));
  m.put("wall_ms", fmt_double(now_ms() - t0));
  m.write(output + ".manifest");
  return 0;
}

int run_track(const std::string& input, const std::string& output, Config cfg,
              const std::string& algo, const std::string& mode, int k) {
  const double t0 = now_ms();
  DetectionFile file;
  {
    auto in = open_input(input);
    file = read_detections(in);
  }
  std::vector<Trajectory> tracks;
  if (algo == "iht") {
    const DriverConfig dcfg = cfg.driver_config();
    const TrackResult result = mode == "incremental" ? run_incremental(file.detections, dcfg)
                                                     : run_offline(file.detections, dcfg);
    tracks = result.tracks;
  } else if (algo == "ksp") {
    BaselineCosts costs;
    costs.w_fix = cfg.w_fix.front();
    costs.lambda = cfg.lambda.front();
    costs.metric = cfg.feature_metric == "l1" ? AppearanceParams::Metric::l1
                                              : AppearanceParams::Metric::angular_degrees;
    costs.confidence_blind = cfg.confidence_blind;
    const KspResult result = ksp_track(file.detections, k, costs);
    if (result.shortfall)
      std::cerr << "ksp: only " << result.tracks.size() << " of " << k
                << " disjoint paths exist\n";
    tracks = result.tracks;
  } else {
    throw UsageError("track: unknown algorithm '" + algo + "'");
  }
  {
    auto out = open_output(output);
    write_trajectories(out, tracks, file.dim);
  }
  ManifestWriter m;
  m.put("command", "track");
  m.put("algo", algo);
  m.put("mode", mode);
  m.put("k", std::to_string(k));
  m.put("input", input);
  m.put("output", output);
  m.put("tracks", std::to_string(tracks.size()));
  m.put("wall_ms", fmt_double(now_ms() - t0));
  m.put_config(cfg);
  m.write(output + ".manifest");
  return 0;
}

int cmd_track(const std::string& input, const std::string& output, const std::string& config_path,
              const std::string& algo, const std::string& mode, int k, bool have_seed,
              uint64_t seed, const std::string& manifest_path) {
  if (!manifest_path.empty()) {
    const auto kv = read_manifest(manifest_path);
    const auto need = [&](const std::string& key) {
      const auto it = kv.find(key);
      if (it == kv.end()) throw InputError("manifest missing key '" + key + "'");
      return it->second;
    };
    Config cfg;
    for (const std::string& key : Config::keys()) {
      const auto it = kv.find("cfg." + key);
      if (it != kv.end()) cfg.set(key, it->second);
    }
    return run_track(input.empty() ? need("input") : input,
                     output.empty() ? need("output") : output, cfg, need("algo"), need("mode"),
                     std::stoi(need("k")));
  }
  if (input.empty() || output.empty())
    throw UsageError("track: --input and --output are required");
  Config cfg = load_config(config_path, false);
  if (have_seed) cfg.seed = seed;
  if (mode != "offline" && mode != "incremental")
    throw UsageError("track: mode must be offline or incremental");
  return run_track(input, output, cfg, algo, mode, k);
}

int cmd_evaluate(const std::string& gt_path, const std::string& hyp_path,
                 const std::string& output, double radius, const std::string& events_path) {
  const double t0 = now_ms();
  std::vector<Trajectory> gt, hyp;
  {
    auto in = open_input(gt_path);
    gt = read_ground_truth(in);
  }
  {
    auto in = open_input(hyp_path);
    hyp = read_trajectories(in);
  }
  std::vector<MotEvent> events;
  const MotReport report = evaluate(gt, hyp, radius, events_path.empty() ? nullptr : &events);
  if (output.empty()) {
    write_report(std::cout, report);
  } else {
    auto out = open_output(output);
    write_report(out, report);
    ManifestWriter m;
    m.put("command", "evaluate");
    m.put("ground_truth", gt_path);
    m.put("hypotheses", hyp_path);
    m.put("match_radius", fmt_double(radius));
    m.put("output", output);
    m.put("mota", fmt_double(report.mota));
    m.put("wall_ms", fmt_double(now_ms() - t0));
    m.write(output + ".manifest");
  }
  if (!events_path.empty()) {
    auto out = open_output(events_path);
    write_events(out, events);
  }
  return 0;
}

int cmd_sweep(const std::string& spec, int reps, int workers, const std::string& output,
              const std::string& config_path, const std::string& variants_arg, double toy_p,
              uint64_t seed) {
  const size_t eq = spec.find('=');
  if (eq == std::string::npos) throw UsageError("sweep: expected PARAM=v1,v2,...");
  const std::string param = spec.substr(0, eq);
  std::vector<double> values;
  {
    std::istringstream s(spec.substr(eq + 1));
    std::string item;
    while (std::getline(s, item, ',')) {
      std::istringstream e(item);
      double v;
      if (!(e >> v)) throw UsageError("sweep: bad value '" + item + "'");
      values.push_back(v);
    }
  }
  if (values.empty()) throw UsageError("sweep: no values given");
  if (param != "p") {
    Config probe;
    try {
      probe.set(param, fmt_double(values.front()));
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<BenchVariant> variants;
  {
    std::istringstream s(variants_arg);
    std::string name;
    while (std::getline(s, name, ',')) {
      const auto it = variant_catalog().find(name);
      if (it == variant_catalog().end()) throw UsageError("sweep: unknown variant '" + name + "'");
      variants.push_back(it->second);
    }
  }
  if (variants.empty()) throw UsageError("sweep: no variants given");

  const Config base = load_config(config_path, true);
  ToyConfig toy;
  toy.p = toy_p;
  toy.seed = seed;
  const double t0 = now_ms();
  const std::vector<SweepRow> rows = sweep_toy(param, values, reps, workers, variants, base, toy);
  {
    auto out = open_output(output);
    write_sweep_csv(out, rows);
  }
  ManifestWriter m;
  m.put("command", "sweep");
  m.put("sweep", spec);
  m.put("reps", std::to_string(reps));
  m.put("workers", std::to_string(workers));
  m.put("variants", variants_arg);
  m.put("toy_p", fmt_double(toy_p));
  m.put("seed", std::to_string(seed));
  m.put("output", output);
  m.put("wall_ms", fmt_double(now_ms() - t0));
  m.put_config(base);
  m.write(output + ".manifest");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-object tracking by iterative hypothesis testing on a tracklet graph"};
  app.require_subcommand(1);

  // generate-toy
  auto* gen = app.add_subcommand("generate-toy", "Generate the 3-target toy benchmark");
  double gen_p = 0.5, gen_q = 0.5;
  uint64_t gen_seed = 0;
  int gen_horizon = 11;
  std::string gen_out, gen_gt;
  gen->add_option("--p", gen_p, "State 1 -> 2 transition probability");
  gen->add_option("--q", gen_q, "State 2 -> 1 return probability");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--horizon", gen_horizon, "Frame count");
  gen->add_option("--output", gen_out, "Detections file")->required();
  gen->add_option("--gt", gen_gt, "Ground-truth file");

  // generate-synth
  auto* synth = app.add_subcommand("generate-synth", "Generate a long 2-D benchmark");
  int synth_frames = 500, synth_targets = 8;
  double synth_p = 0.12, synth_q = 0.3;
  uint64_t synth_seed = 0;
  std::string synth_out, synth_gt;
  synth->add_option("--frames", synth_frames, "Frame count");
  synth->add_option("--targets", synth_targets, "Target count");
  synth->add_option("--p", synth_p, "State 1 -> 2 transition probability");
  synth->add_option("--q", synth_q, "State 2 -> 1 return probability");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--output", synth_out, "Detections file")->required();
  synth->add_option("--gt", synth_gt, "Ground-truth file");

  // track
  auto* track = app.add_subcommand("track", "Associate detections into trajectories");
  std::string track_in, track_out, track_cfg, track_algo = "iht", track_mode = "offline";
  std::string track_manifest;
  int track_k = 3;
  uint64_t track_seed = 0;
  bool track_have_seed = false;
  track->add_option("--input", track_in, "Detections file");
  track->add_option("--output", track_out, "Trajectories file");
  track->add_option("--config", track_cfg, "Config file (default: reference working point)");
  track->add_option("--algo", track_algo, "iht | ksp");
  track->add_option("--mode", track_mode, "offline | incremental");
  track->add_option("--k", track_k, "Track count for ksp");
  track->add_option("--seed", track_seed, "Seed override")->each([&](const std::string&) {
    track_have_seed = true;
  });
  track->add_option("--from-manifest", track_manifest, "Re-run a recorded tracking run");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "CLEAR MOT scoring of trajectories");
  std::string eval_gt, eval_hyp, eval_out, eval_events;
  double eval_radius = 10.0;
  eval->add_option("--gt", eval_gt, "Ground-truth file")->required();
  eval->add_option("--hyp", eval_hyp, "Hypothesis trajectories file")->required();
  eval->add_option("--output", eval_out, "Report file (default: stdout)");
  eval->add_option("--radius", eval_radius, "Match radius (world units)");
  eval->add_option("--events", eval_events, "Per-frame event log file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Toy-benchmark parameter sweep, CSV output");
  std::string sweep_spec, sweep_out, sweep_cfg, sweep_variants = "iht,iht_blind,ksp,ksp_blind";
  int sweep_reps = 100, sweep_workers = 2;
  double sweep_p = 0.5;
  uint64_t sweep_seed = 0;
  sweep->add_option("--sweep", sweep_spec, "PARAM=v1,v2,... ('p' or any config key)")->required();
  sweep->add_option("--reps", sweep_reps, "Replications per value");
  sweep->add_option("--workers", sweep_workers, "Worker threads");
  sweep->add_option("--output", sweep_out, "CSV file")->required();
  sweep->add_option("--config", sweep_cfg, "Base config (default: toy working point)");
  sweep->add_option("--variants", sweep_variants, "Comma list of tracker variants");
  sweep->add_option("--p", sweep_p, "Toy p when sweeping another parameter");
  sweep->add_option("--seed", sweep_seed, "Base seed (rep r uses seed+r)");

  try {
    app.parse(argc, argv);
    if (gen->parsed())
      return cmd_generate_toy(gen_p, gen_q, gen_seed, gen_horizon, gen_out, gen_gt);
    if (synth->parsed())
      return cmd_generate_synth(synth_frames, synth_targets, synth_p, synth_q, synth_seed,
                                synth_out, synth_gt);
    if (track->parsed())
      return cmd_track(track_in, track_out, track_cfg, track_algo, track_mode, track_k,
                       track_have_seed, track_seed, track_manifest);
    if (eval->parsed())
      return cmd_evaluate(eval_gt, eval_hyp, eval_out, eval_radius, eval_events);
    if (sweep->parsed())
      return cmd_sweep(sweep_spec, sweep_reps, sweep_workers, sweep_out, sweep_cfg,
                       sweep_variants, sweep_p, sweep_seed);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const iht::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const iht::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
