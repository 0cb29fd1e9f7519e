#include "iht/config.hpp"
#include "iht/io.hpp"

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "iht/toy.hpp"
#include "test_support.hpp"

namespace iht {
namespace {

TEST(IoFormats, DetectionsRoundTripExactly) {
  Rng rng(14);
  for (int dim = 1; dim <= 2; ++dim) {
    std::vector<Detection> dets;
    for (int i = 0; i < 50; ++i) {
      Detection d;
      d.t = static_cast<int>(rng.below(100));
      d.y = {rng.gaussian(0, 50), dim == 2 ? rng.gaussian(0, 50) : 0.0};
      d.features = {rng.gaussian(0, 200), rng.uniform(-1e6, 1e6)};
      d.confidences = {rng.uniform(0, 1), rng.uniform(0, 1)};
      dets.push_back(d);
    }
    std::ostringstream out;
    write_detections(out, dets, dim);
    std::istringstream in(out.str());
    const DetectionFile file = read_detections(in);
    EXPECT_EQ(file.dim, dim);
    EXPECT_EQ(file.nfeat, 2);
    ASSERT_EQ(file.detections.size(), dets.size());
    for (size_t i = 0; i < dets.size(); ++i) {
      EXPECT_EQ(file.detections[i].t, dets[i].t);
      EXPECT_EQ(file.detections[i].y.x, dets[i].y.x);
      EXPECT_EQ(file.detections[i].y.y, dets[i].y.y);
      EXPECT_EQ(file.detections[i].features, dets[i].features);
      EXPECT_EQ(file.detections[i].confidences, dets[i].confidences);
    }
  }
}

TEST(IoFormats, TrajectoryAndGroundTruthRoundTrip) {
  ToyConfig toy;
  toy.seed = 4;
  const BenchData data = generate_toy(toy);
  std::ostringstream gt_out, tr_out;
  write_ground_truth(gt_out, data.ground_truth, 1);
  write_trajectories(tr_out, data.ground_truth, 1);
  std::istringstream gt_in(gt_out.str());
  std::istringstream tr_in(tr_out.str());
  const std::vector<Trajectory> gt = read_ground_truth(gt_in);
  const std::vector<Trajectory> tr = read_trajectories(tr_in);
  ASSERT_EQ(gt.size(), 3u);
  ASSERT_EQ(tr.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(gt[i].id, data.ground_truth[i].id);
    ASSERT_EQ(gt[i].detections.size(), 11u);
    for (size_t k = 0; k < 11; ++k) {
      EXPECT_EQ(gt[i].detections[k].t, data.ground_truth[i].detections[k].t);
      EXPECT_EQ(gt[i].detections[k].y.x, data.ground_truth[i].detections[k].y.x);
      EXPECT_EQ(tr[i].detections[k].y.x, data.ground_truth[i].detections[k].y.x);
    }
  }
}

TEST(IoFormats, RejectsMalformedInput) {
  {
    std::istringstream in("trajectories 1\n0 0 1.0\n");
    EXPECT_THROW(read_detections(in), InputError);
  }
  {
    std::istringstream in("detections 3 1\n");
    EXPECT_THROW(read_detections(in), InputError);
  }
  {
    std::istringstream in("detections 1 1\n0 0.0 5.0 1.5\n");
    EXPECT_THROW(read_detections(in), InputError);  // confidence > 1
  }
  {
    std::istringstream in("detections 1 1\n0 0.0 5.0\n");
    EXPECT_THROW(read_detections(in), InputError);  // missing confidence
  }
  {
    std::istringstream in("");
    EXPECT_THROW(read_trajectories(in), InputError);
  }
}

TEST(IoFormats, GraphDumpIsStable) {
  ToyConfig toy;
  toy.seed = 6;
  const BenchData data = generate_toy(toy);
  GraphParams p;
  p.tau_max = 1;
  const TrackletGraph g = TrackletGraph::build(data.detections, p);
  const std::string a = graph_dump(g, 1);
  const std::string b = graph_dump(g, 1);
  EXPECT_EQ(a, b);
  size_t nodes = 0, edges = 0, pos = 0;
  for (std::istringstream in(a); in;) {
    std::string line;
    if (!std::getline(in, line)) break;
    if (line.rfind("node ", 0) == 0) ++nodes;
    if (line.rfind("edge ", 0) == 0) ++edges;
    (void)pos;
  }
  EXPECT_EQ(nodes, 33u);
  EXPECT_EQ(edges, 90u);
}

TEST(Config, ParseSetAndSerializeRoundTrip) {
  Config cfg;
  std::istringstream in(
      "# comment line\n"
      "tau_max 40\n"
      "gamma = 2.5\n"
      "lambda 1,2.5\n"
      "schedule random\n"
      "k2 0.5\n");
  cfg.load_stream(in);
  EXPECT_EQ(cfg.tau_max, 40);
  EXPECT_DOUBLE_EQ(cfg.gamma, 2.5);
  ASSERT_EQ(cfg.lambda.size(), 2u);
  EXPECT_DOUBLE_EQ(cfg.lambda[1], 2.5);
  EXPECT_EQ(cfg.schedule, "random");
  EXPECT_DOUBLE_EQ(cfg.k2_start, 0.5);
  EXPECT_DOUBLE_EQ(cfg.k2_end, 0.5);

  Config reparsed;
  std::istringstream again(cfg.serialize());
  reparsed.load_stream(again);
  EXPECT_EQ(reparsed.serialize(), cfg.serialize());

  EXPECT_THROW(cfg.set("no_such_key", "1"), InputError);
  EXPECT_THROW(cfg.set("gamma", "abc"), InputError);
  EXPECT_THROW(cfg.set("use_velocity", "maybe"), InputError);
}

TEST(Config, EnvOverridesApply) {
  ::setenv("IHT_TAU_MAX", "77", 1);
  ::setenv("IHT_SCHEDULE", "confidence_first", 1);
  Config cfg;
  cfg.apply_env();
  ::unsetenv("IHT_TAU_MAX");
  ::unsetenv("IHT_SCHEDULE");
  EXPECT_EQ(cfg.tau_max, 77);
  EXPECT_EQ(cfg.schedule, "confidence_first");
}

TEST(Config, DriverConfigValidation) {
  Config cfg;
  EXPECT_NO_THROW(cfg.driver_config());
  cfg.schedule = "bogus";
  EXPECT_THROW(cfg.driver_config(), InputError);
  cfg = Config{};
  cfg.feature_metric = "cosine";
  EXPECT_THROW(cfg.driver_config(), InputError);
  cfg = Config{};
  cfg.c_min = 5;
  cfg.c_max = 5;
  EXPECT_THROW(cfg.driver_config(), InputError);
}

TEST(Config, ReferenceDefaultsMatchWorkingPoint) {
  const Config cfg;
  EXPECT_EQ(cfg.tau_max, 120);
  EXPECT_DOUBLE_EQ(cfg.gamma, 3.0);
  EXPECT_DOUBLE_EQ(cfg.kappa, 5.0);
  EXPECT_DOUBLE_EQ(cfg.c_min, 20.0);
  EXPECT_DOUBLE_EQ(cfg.c_max, 100.0);
  EXPECT_DOUBLE_EQ(cfg.k1_start, 5.0);
  EXPECT_DOUBLE_EQ(cfg.k2_start, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cfg.w_fix[0], 5.0);
}

TEST(Config, ShippedFilesMatchPresets) {
  const std::string root = IHT_SOURCE_DIR;
  Config reference = Config::from_file(root + "/configs/reference.cfg");
  EXPECT_EQ(reference.serialize(), Config{}.serialize());
  Config toy = Config::from_file(root + "/configs/toy.cfg");
  EXPECT_EQ(toy.serialize(), toy_preset().serialize());
}

}  // namespace
}  // namespace iht
