#pragma once

#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "iht/baseline.hpp"
#include "iht/config.hpp"
#include "iht/mot_eval.hpp"
#include "iht/toy.hpp"

namespace iht {

// One tracker configuration entered in a benchmark comparison.
struct BenchVariant {
  std::string name;
  enum class Algo { iht, ksp } algo = Algo::iht;
  bool confidence_aware = true;
  SchedulePolicy policy = SchedulePolicy::longest_first;
  ValidationMode validation = ValidationMode::conservative;
  bool incremental = false;
};

inline std::vector<Trajectory> run_variant(const std::vector<Detection>& detections,
                                           int track_count, const BenchVariant& variant,
                                           const Config& base) {
  if (variant.algo == BenchVariant::Algo::ksp) {
    BaselineCosts costs;
    costs.w_fix = base.w_fix.front();
    costs.lambda = base.lambda.front();
    costs.metric = base.feature_metric == "l1" ? AppearanceParams::Metric::l1
                                               : AppearanceParams::Metric::angular_degrees;
    costs.confidence_blind = !variant.confidence_aware;
    return ksp_track(detections, track_count, costs).tracks;
  }
  DriverConfig cfg = base.driver_config();
  cfg.policy = variant.policy;
  cfg.validation_mode = variant.validation;
  cfg.confidence_blind = !variant.confidence_aware;
  const TrackResult result =
      variant.incremental ? run_incremental(detections, cfg) : run_offline(detections, cfg);
  return result.tracks;
}

inline MotReport run_variant_scored(const BenchData& data, const BenchVariant& variant,
                                    const Config& base) {
  const std::vector<Trajectory> tracks =
      run_variant(data.detections, static_cast<int>(data.ground_truth.size()), variant, base);
  return evaluate(data.ground_truth, tracks, base.match_radius);
}

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::string variant;
  int reps = 0;
  double mota_mean = 0.0, mota_std = 0.0;
  double motp_mean = 0.0, motp_std = 0.0;
  double miss_mean = 0.0, miss_std = 0.0;
  double fp_mean = 0.0, fp_std = 0.0;
  double switch_mean = 0.0, switch_std = 0.0;
  double reinit_mean = 0.0, reinit_std = 0.0;
};

namespace detail {

struct MeanStd {
  double mean = 0.0, sd = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd ms;
  if (xs.empty()) return ms;
  for (double x : xs) ms.mean += x;
  ms.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - ms.mean) * (x - ms.mean);
    ms.sd = std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
  }
  return ms;
}

}  // namespace detail

// Toy-benchmark parameter sweep. `param` is either "p" (the appearance-noise
// transition probability of the generator) or any tracker config key. Every
// variant sees the same generated data for a given (value, rep) pair, so
// comparisons are paired by seed. Replications run on `workers` threads;
// aggregation order is fixed, results are deterministic.
inline std::vector<SweepRow> sweep_toy(const std::string& param,
                                       const std::vector<double>& values, int reps, int workers,
                                       const std::vector<BenchVariant>& variants,
                                       const Config& base, const ToyConfig& toy_base) {
  if (reps < 1) throw UsageError("sweep: reps must be >= 1");
  if (values.empty()) throw UsageError("sweep: no values given");
  struct Task {
    size_t value_index;
    int rep;
  };
  std::vector<Task> tasks;
  for (size_t vi = 0; vi < values.size(); ++vi)
    for (int rep = 0; rep < reps; ++rep) tasks.push_back({vi, rep});

  // reports[task][variant]
  std::vector<std::vector<MotReport>> reports(tasks.size(),
                                              std::vector<MotReport>(variants.size()));
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t ti = next.fetch_add(1); ti < tasks.size(); ti = next.fetch_add(1)) {
      const Task& task = tasks[ti];
      Config cfg = base;
      ToyConfig toy = toy_base;
      if (param == "p") toy.p = values[task.value_index];
      else cfg.set(param, fmt_double(values[task.value_index]));
      toy.seed = toy_base.seed + static_cast<uint64_t>(task.rep);
      if (!toy.valid()) throw UsageError("sweep: invalid toy parameters");
      const BenchData data = generate_toy(toy);
      for (size_t vi = 0; vi < variants.size(); ++vi)
        reports[ti][vi] = run_variant_scored(data, variants[vi], cfg);
    }
  };
  const int thread_count = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int i = 1; i < thread_count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> rows;
  for (size_t vi = 0; vi < values.size(); ++vi) {
    for (size_t var = 0; var < variants.size(); ++var) {
      std::vector<double> mota, motp, ms, fp, sw, re;
      for (size_t ti = 0; ti < tasks.size(); ++ti) {
        if (tasks[ti].value_index != vi) continue;
        const MotReport& r = reports[ti][var];
        mota.push_back(r.mota);
        motp.push_back(r.motp);
        ms.push_back(static_cast<double>(r.misses));
        fp.push_back(static_cast<double>(r.false_positives));
        sw.push_back(static_cast<double>(r.switches));
        re.push_back(static_cast<double>(r.reinitializations));
      }
      SweepRow row;
      row.param = param;
      row.value = values[vi];
      row.variant = variants[var].name;
      row.reps = reps;
      const auto fill = [](const std::vector<double>& xs, double& mean, double& sd) {
        const detail::MeanStd s = detail::mean_std(xs);
        mean = s.mean;
        sd = s.sd;
      };
      fill(mota, row.mota_mean, row.mota_std);
      fill(motp, row.motp_mean, row.motp_std);
      fill(ms, row.miss_mean, row.miss_std);
      fill(fp, row.fp_mean, row.fp_std);
      fill(sw, row.switch_mean, row.switch_std);
      fill(re, row.reinit_mean, row.reinit_std);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "param,value,variant,reps,mota_mean,mota_std,motp_mean,motp_std,"
         "miss_mean,miss_std,fp_mean,fp_std,switch_mean,switch_std,reinit_mean,reinit_std\n";
  for (const SweepRow& r : rows) {
    out << r.param << ',' << fmt_double(r.value) << ',' << r.variant << ',' << r.reps << ','
        << fmt_double(r.mota_mean) << ',' << fmt_double(r.mota_std) << ','
        << fmt_double(r.motp_mean) << ',' << fmt_double(r.motp_std) << ','
        << fmt_double(r.miss_mean) << ',' << fmt_double(r.miss_std) << ','
        << fmt_double(r.fp_mean) << ',' << fmt_double(r.fp_std) << ','
        << fmt_double(r.switch_mean) << ',' << fmt_double(r.switch_std) << ','
        << fmt_double(r.reinit_mean) << ',' << fmt_double(r.reinit_std) << '\n';
  }
}

}  // namespace iht
