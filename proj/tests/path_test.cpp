#include "iht/path.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace iht {
namespace {

Detection det(int t, double x) { return Detection{t, {x, 0.0}, {0.0}, {0.0}}; }

// a -> {b, c} -> d with unit edge weights and zero inner costs.
TrackletGraph diamond() {
  GraphParams p;
  p.tau_max = 1;
  p.use_velocity = false;
  return TrackletGraph::build({det(0, 0.0), det(1, 1.0), det(1, -1.0), det(2, 0.0)}, p);
}

TEST(PathEngine, DiamondWithHooks) {
  const TrackletGraph g = diamond();
  const WindowView view = make_window(g, 0, 2);
  PathEngine engine;
  PathQuery q;
  q.source = 0;
  q.sinks = {3};
  q.cost_hook = [](NodeId id) { return id == 2 ? 5.0 : 0.0; };
  const PathResult r = engine.shortest_paths(view, q);
  ASSERT_TRUE(r.best.has_value());
  EXPECT_EQ(r.best->nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(r.best->cost, 2.0);
  ASSERT_TRUE(r.second_best.has_value());
  EXPECT_EQ(r.second_best->nodes, (std::vector<NodeId>{0, 2, 3}));
  EXPECT_DOUBLE_EQ(r.second_best->cost, 7.0);
}

TEST(PathEngine, DiamondTieBreaksBySmallestNodeId) {
  const TrackletGraph g = diamond();
  const WindowView view = make_window(g, 0, 2);
  PathEngine engine;
  PathQuery q;
  q.source = 0;
  q.sinks = {3};
  const PathResult r = engine.shortest_paths(view, q);
  ASSERT_TRUE(r.best.has_value());
  EXPECT_EQ(r.best->nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(r.best->cost, 2.0);
  ASSERT_TRUE(r.second_best.has_value());
  EXPECT_DOUBLE_EQ(r.second_best->cost, 2.0);
}

TEST(PathEngine, UnreachableSinkGivesNoPath) {
  GraphParams p;
  p.tau_max = 1;
  const TrackletGraph g = TrackletGraph::build({det(0, 0.0), det(5, 0.0)}, p);
  const WindowView view = make_window(g, 0, 5);
  PathEngine engine;
  PathQuery q;
  q.source = 0;
  q.sinks = {1};
  const PathResult r = engine.shortest_paths(view, q);
  EXPECT_FALSE(r.best.has_value());
  EXPECT_FALSE(r.second_best.has_value());
}

// Deterministic pseudo-random hook from the node id.
double hash_hook(NodeId id, uint64_t salt) {
  uint64_t s = salt ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(id + 1));
  return static_cast<double>(splitmix64(s) >> 40) / 1048576.0 * 3.0;
}

TEST(PathEngine, MatchesExhaustiveEnumerationOnRandomDags) {
  Rng rng(4242);
  int nontrivial = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const int targets = 2 + static_cast<int>(rng.below(3));
    const int frames = 3 + static_cast<int>(rng.below(4));
    const std::vector<Detection> dets = testing::random_instance(rng, targets, frames);
    GraphParams p;
    p.tau_max = 1 + static_cast<int>(rng.below(2));
    const TrackletGraph g = TrackletGraph::build(dets, p);
    const WindowView view = make_window(g, 0, frames - 1);
    const NodeId source = static_cast<NodeId>(rng.below(static_cast<uint64_t>(targets)));
    const std::vector<NodeId> sinks = frontier_sinks(view, source);
    const uint64_t salt = rng.next_u64();

    PathEngine engine;
    PathQuery q;
    q.source = source;
    q.sinks = sinks;
    q.cost_hook = [&](NodeId id) { return hash_hook(id, salt); };
    const PathResult r = engine.shortest_paths(view, q);

    std::vector<testing::EnumeratedPath> all;
    testing::enumerate_paths(
        g, view.order, false, source, sinks,
        [&](NodeId id) { return id == source ? 0.0 : hash_hook(id, salt); }, all);

    if (all.empty()) {
      EXPECT_FALSE(r.best.has_value());
      continue;
    }
    ++nontrivial;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& path : all) best = std::min(best, path.cost);
    ASSERT_TRUE(r.best.has_value());
    EXPECT_NEAR(r.best->cost, best, 1e-9);

    // Oracle for the second best: cheapest enumerated path that differs from
    // the engine's best and avoids its interior nodes.
    double second = std::numeric_limits<double>::infinity();
    for (const auto& path : all) {
      if (path.nodes == r.best->nodes) continue;
      bool overlaps = false;
      for (size_t i = 0; i < path.nodes.size() && !overlaps; ++i)
        for (size_t j = 1; j + 1 < r.best->nodes.size(); ++j)
          if (path.nodes[i] == r.best->nodes[j]) {
            overlaps = true;
            break;
          }
      if (!overlaps) second = std::min(second, path.cost);
    }
    if (std::isinf(second)) {
      EXPECT_FALSE(r.second_best.has_value());
    } else {
      ASSERT_TRUE(r.second_best.has_value());
      EXPECT_NEAR(r.second_best->cost, second, 1e-9);
    }
  }
  EXPECT_GT(nontrivial, 30);
}

TEST(PathEngine, OverlayLocalityAcrossQueries) {
  const TrackletGraph g = diamond();
  const WindowView view = make_window(g, 0, 2);
  PathEngine engine;
  PathQuery q1;
  q1.source = 0;
  q1.sinks = {3};
  q1.cost_hook = [](NodeId id) { return id == 1 ? 9.0 : 0.0; };
  PathQuery q2 = q1;
  q2.cost_hook = [](NodeId id) { return id == 2 ? 9.0 : 0.0; };

  const PathResult r1 = engine.shortest_paths(view, q1);
  const PathResult r2 = engine.shortest_paths(view, q2);
  const PathResult r1_again = engine.shortest_paths(view, q1);
  ASSERT_TRUE(r1.best && r2.best && r1_again.best);
  EXPECT_EQ(r1.best->nodes, (std::vector<NodeId>{0, 2, 3}));
  EXPECT_EQ(r2.best->nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_EQ(r1_again.best->nodes, r1.best->nodes);
  EXPECT_DOUBLE_EQ(r1_again.best->cost, r1.best->cost);

  PathEngine fresh;
  const PathResult rf = fresh.shortest_paths(view, q1);
  EXPECT_EQ(rf.best->nodes, r1.best->nodes);
  EXPECT_DOUBLE_EQ(rf.best->cost, r1.best->cost);
}

TEST(PathEngine, ConstantHookShiftPreservesArgmin) {
  // Layered graph: every source->sink path traverses one node per frame.
  Rng rng(512);
  const std::vector<Detection> dets = testing::random_instance(rng, 3, 5);
  GraphParams p;
  p.tau_max = 1;
  const TrackletGraph g = TrackletGraph::build(dets, p);
  const WindowView view = make_window(g, 0, 4);
  PathEngine engine;
  PathQuery q;
  q.source = 0;
  q.sinks = frontier_sinks(view, 0);
  const uint64_t salt = 99;
  q.cost_hook = [&](NodeId id) { return hash_hook(id, salt); };
  const PathResult base = engine.shortest_paths(view, q);
  ASSERT_TRUE(base.best.has_value());
  const double kappa = 2.5;
  PathQuery shifted = q;
  shifted.cost_hook = [&](NodeId id) { return hash_hook(id, salt) + kappa; };
  const PathResult moved = engine.shortest_paths(view, shifted);
  ASSERT_TRUE(moved.best.has_value());
  EXPECT_EQ(moved.best->nodes, base.best->nodes);
  const double L = static_cast<double>(base.best->nodes.size()) - 1.0;
  EXPECT_NEAR(moved.best->cost, base.best->cost + kappa * L, 1e-9);
}

TEST(SharedPrefix, PrefixRules) {
  const std::vector<NodeId> best{10, 11, 12, 13};
  EXPECT_EQ(shared_prefix(best, {}), best);
  const Path source_only{{10, 20, 21}, 1.0};
  EXPECT_EQ(shared_prefix(best, {source_only}), (std::vector<NodeId>{10}));
  const Path two_shared{{10, 11, 30, 31}, 1.0};
  EXPECT_EQ(shared_prefix(best, {two_shared}), (std::vector<NodeId>{10, 11}));
  EXPECT_EQ(shared_prefix(best, {two_shared, source_only}), (std::vector<NodeId>{10}));
}

TEST(PathEngine, CompetitiveForksFindCheapOverlappingRival) {
  // best a-b-c-d; rival a-b-e-f deviates at b with moderate extra cost.
  GraphParams p;
  p.tau_max = 1;
  p.use_velocity = false;
  const TrackletGraph g = TrackletGraph::build(
      {det(0, 0.0), det(1, 0.0), det(2, 0.0), det(3, 0.0), det(2, 3.0), det(3, 3.0)}, p);
  // ids: a=0, b=1, c=2, d=3, e=4, f=5
  const WindowView view = make_window(g, 0, 3);
  PathEngine engine;
  PathQuery q;
  q.source = 0;
  q.sinks = frontier_sinks(view, 0);
  const PathResult r = engine.shortest_paths(view, q);
  ASSERT_TRUE(r.best.has_value());
  EXPECT_EQ(r.best->nodes, (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(r.best->cost, 0.0);

  // Deviations exist at b (a-b-e-f) and at c (a-b-c-f), both cost 3.
  const std::vector<Path> generous = engine.competitive_forks(view, q, *r.best, 4.0);
  ASSERT_EQ(generous.size(), 2u);
  EXPECT_EQ(generous[0].nodes, (std::vector<NodeId>{0, 1, 4, 5}));
  EXPECT_DOUBLE_EQ(generous[0].cost, 3.0);
  EXPECT_EQ(generous[1].nodes, (std::vector<NodeId>{0, 1, 2, 5}));
  EXPECT_EQ(shared_prefix(r.best->nodes, generous), (std::vector<NodeId>{0, 1}));

  const std::vector<Path> strict = engine.competitive_forks(view, q, *r.best, 2.0);
  EXPECT_TRUE(strict.empty());
}

}  // namespace
}  // namespace iht
