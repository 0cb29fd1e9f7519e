#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "iht/graph.hpp"

namespace iht {

inline constexpr double kCostEps = 1e-12;  // absolute tolerance for cost ties

// Lightweight window over a graph: the tracklets with at least one extreme
// time inside [t_lo, t_hi], in traversal order. Reversed views flip every
// edge; weights and inner costs are untouched. Views never copy the graph
// and are invalidated by any mutation.
struct WindowView {
  const TrackletGraph* graph = nullptr;
  bool reversed = false;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<NodeId> order;

  size_t size() const { return order.size(); }
};

inline WindowView make_window(const TrackletGraph& g, double t_lo, double t_hi,
                              bool reversed = false) {
  WindowView view;
  view.graph = &g;
  view.reversed = reversed;
  view.t_lo = t_lo;
  view.t_hi = t_hi;
  for (NodeId id = 0; id < g.capacity(); ++id) {
    if (!g.alive(id)) continue;
    const Tracklet& t = g.tracklet(id);
    const bool start_in = t.t_start >= t_lo && t.t_start <= t_hi;
    const bool end_in = t.t_end >= t_lo && t.t_end <= t_hi;
    if (start_in || end_in) view.order.push_back(id);
  }
  // Edges run strictly forward in time, so sorting by the leading extremity
  // yields a topological order of the view.
  if (reversed) {
    std::sort(view.order.begin(), view.order.end(), [&g](NodeId a, NodeId b) {
      const int ta = g.tracklet(a).t_end, tb = g.tracklet(b).t_end;
      if (ta != tb) return ta > tb;
      return a < b;
    });
  } else {
    std::sort(view.order.begin(), view.order.end(), [&g](NodeId a, NodeId b) {
      const int ta = g.tracklet(a).t_start, tb = g.tracklet(b).t_start;
      if (ta != tb) return ta < tb;
      return a < b;
    });
  }
  return view;
}

inline WindowView reverse(const WindowView& view) {
  return make_window(*view.graph, view.t_lo, view.t_hi, !view.reversed);
}

// Frontier nodes where a path may terminate: anything whose successors can
// lie beyond the window, plus dead ends inside it. The source never counts.
inline std::vector<NodeId> frontier_sinks(const WindowView& view, NodeId source) {
  const TrackletGraph& g = *view.graph;
  std::vector<NodeId> sinks;
  for (NodeId id : view.order) {
    if (id == source) continue;
    const Tracklet& t = g.tracklet(id);
    bool at_frontier = view.reversed ? (t.t_start - g.params.tau_max < view.t_lo)
                                     : (t.t_end + g.params.tau_max > view.t_hi);
    if (!at_frontier) {
      bool has_out = false;
      const auto& edges = view.reversed ? g.in_edges(id) : g.out_edges(id);
      for (const auto& e : edges) {
        if (!g.alive(e.peer)) continue;
        const Tracklet& pt = g.tracklet(e.peer);
        if ((pt.t_start >= view.t_lo && pt.t_start <= view.t_hi) ||
            (pt.t_end >= view.t_lo && pt.t_end <= view.t_hi)) {
          has_out = true;
          break;
        }
      }
      at_frontier = !has_out;
    }
    if (at_frontier) sinks.push_back(id);
  }
  return sinks;
}

struct PathQuery {
  NodeId source = -1;
  std::vector<NodeId> sinks;
  // Transient per-node cost added on top of the inner cost for this query
  // only; never applied to the source. Values must be >= 0.
  std::function<double(NodeId)> cost_hook;
};

struct Path {
  std::vector<NodeId> nodes;
  double cost = 0.0;
};

// Path cost convention: sum of edge weights plus (inner cost + hook) of every
// traversed node, source hook excluded. best and second_best share no node
// except the source; second_best is recomputed with best's interior deleted.
struct PathResult {
  std::optional<Path> best;
  std::optional<Path> second_best;
};

// Single-pass relaxation in topological order, with reusable stamped buffers
// so repeated queries do not churn allocations. Queries are read-only on the
// graph; hook state is query-private.
class PathEngine {
 public:
  PathResult shortest_paths(const WindowView& view, const PathQuery& query) {
    bind(view, query);
    PathResult result;
    result.best = run(view, query.source);
    if (!result.best) return result;
    if (result.best->nodes.size() >= 3) {
      // Interior nodes (everything strictly between source and sink) leave
      // the view; the rerun may still end at the same sink.
      for (size_t i = 1; i + 1 < result.best->nodes.size(); ++i)
        removed_[static_cast<size_t>(lookup(result.best->nodes[i]))] = 1;
      result.second_best = run(view, query.source);
    } else {
      // A direct source->sink hop has no interior; the runner-up is the
      // cheapest path that deviates from it.
      result.second_best = cheapest_deviation(view, *result.best);
    }
    return result;
  }

  // Cheapest path that forks off `best` at each node and still costs at most
  // `threshold`, one per fork point. Together with shared_prefix this bounds
  // how much of `best` stays unambiguous when cheap partially-overlapping
  // rivals exist.
  std::vector<Path> competitive_forks(const WindowView& view, const PathQuery& query,
                                      const Path& best, double threshold) {
    bind(view, query);
    run(view, query.source);  // fills dist_ / reach from the source
    compute_completions(view);

    std::vector<Path> forks;
    for (size_t i = 0; i + 1 < best.nodes.size(); ++i) {
      const NodeId u = best.nodes[i];
      const int32_t lu = lookup(u);
      if (dist_[static_cast<size_t>(lu)] >= kInf) continue;
      double fork_cost = kInf;
      NodeId fork_next = -1;
      for_each_neighbor(view, u, [&](NodeId v, double w) {
        if (v == best.nodes[i + 1]) return;
        const size_t lv = static_cast<size_t>(lookup(v));
        if (comp_[lv] >= kInf) return;
        const double c = dist_[static_cast<size_t>(lu)] + w + comp_[lv];
        if (c < fork_cost - kCostEps || (c < fork_cost + kCostEps && v < fork_next)) {
          fork_cost = c;
          fork_next = v;
        }
      });
      if (fork_next >= 0 && fork_cost <= threshold + kCostEps) {
        Path p;
        p.cost = fork_cost;
        p.nodes.assign(best.nodes.begin(), best.nodes.begin() + static_cast<long>(i + 1));
        int32_t cur = lookup(fork_next);
        while (cur >= 0) {
          p.nodes.push_back(view.order[static_cast<size_t>(cur)]);
          cur = succ_[cur];
        }
        forks.push_back(std::move(p));
      }
    }
    return forks;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  NodeId succ_value(int32_t local) const {
    return local < 0 ? std::numeric_limits<NodeId>::max() : cached_order_[static_cast<size_t>(local)];
  }

  // Cheapest completion from each view node to any sink (node cost included),
  // and the successor achieving it (-1 = stop here). Respects removed_.
  void compute_completions(const WindowView& view) {
    const size_t m = view.size();
    comp_.assign(m, kInf);
    succ_.assign(m, -1);
    for (size_t i = m; i-- > 0;) {
      if (removed_[i]) continue;
      if (is_sink_[i]) {
        // Stopping at a sink always beats continuing: costs are nonnegative.
        comp_[i] = nodecost_[i];
        succ_[i] = -1;
        continue;
      }
      double best_cont = kInf;
      int32_t best_succ = -1;
      for_each_neighbor(view, view.order[i], [&](NodeId v, double w) {
        const size_t lv = static_cast<size_t>(lookup(v));
        if (comp_[lv] >= kInf) return;
        const double c = w + comp_[lv];
        if (c < best_cont - kCostEps || (c < best_cont + kCostEps && v < succ_value(best_succ))) {
          best_cont = c;
          best_succ = static_cast<int32_t>(lv);
        }
      });
      if (best_cont < kInf) {
        comp_[i] = nodecost_[i] + best_cont;
        succ_[i] = best_succ;
      }
    }
  }

  std::vector<NodeId> completion_nodes(const WindowView& view, NodeId from) const {
    std::vector<NodeId> nodes;
    int32_t cur = local_[static_cast<size_t>(from)];
    while (cur >= 0) {
      nodes.push_back(view.order[static_cast<size_t>(cur)]);
      cur = succ_[static_cast<size_t>(cur)];
    }
    return nodes;
  }

  // Cheapest path differing from a two-node best path: either fork at the
  // source or extend through the best path's end node.
  std::optional<Path> cheapest_deviation(const WindowView& view, const Path& best) {
    compute_completions(view);
    double best_cost = kInf;
    NodeId best_via = -1;
    size_t best_prefix = 0;
    for (size_t i = 0; i < best.nodes.size(); ++i) {
      const NodeId u = best.nodes[i];
      const size_t lu = static_cast<size_t>(lookup(u));
      if (dist_[lu] >= kInf) continue;
      const bool at_end = i + 1 == best.nodes.size();
      for_each_neighbor(view, u, [&](NodeId v, double w) {
        if (!at_end && v == best.nodes[i + 1]) return;
        const size_t lv = static_cast<size_t>(lookup(v));
        if (comp_[lv] >= kInf) return;
        const double c = dist_[lu] + w + comp_[lv];
        if (c < best_cost - kCostEps || (c < best_cost + kCostEps && v < best_via)) {
          best_cost = c;
          best_via = v;
          best_prefix = i + 1;
        }
      });
    }
    if (best_via < 0) return std::nullopt;
    Path p;
    p.cost = best_cost;
    p.nodes.assign(best.nodes.begin(), best.nodes.begin() + static_cast<long>(best_prefix));
    for (NodeId n : completion_nodes(view, best_via)) p.nodes.push_back(n);
    return p;
  }

  template <typename Fn>
  void for_each_neighbor(const WindowView& view, NodeId u, Fn&& fn) {
    const TrackletGraph& g = *view.graph;
    const auto& edges = view.reversed ? g.in_edges(u) : g.out_edges(u);
    for (const auto& e : edges) {
      if (!g.alive(e.peer)) continue;
      if (stamp_val(e.peer) != cur_stamp_) continue;  // outside the view
      if (removed_[static_cast<size_t>(local_[static_cast<size_t>(e.peer)])]) continue;
      fn(e.peer, e.weight);
    }
  }

  uint32_t stamp_val(NodeId id) const {
    const size_t i = static_cast<size_t>(id);
    return i < stamp_.size() ? stamp_[i] : 0;
  }

  int32_t lookup(NodeId id) const { return local_[static_cast<size_t>(id)]; }

  void bind(const WindowView& view, const PathQuery& query) {
    const size_t cap = static_cast<size_t>(view.graph->capacity());
    if (stamp_.size() < cap) {
      stamp_.resize(cap, 0);
      local_.resize(cap, -1);
    }
    ++cur_stamp_;
    const size_t m = view.size();
    cached_order_ = view.order;
    for (size_t i = 0; i < m; ++i) {
      stamp_[static_cast<size_t>(view.order[i])] = cur_stamp_;
      local_[static_cast<size_t>(view.order[i])] = static_cast<int32_t>(i);
    }
    nodecost_.assign(m, 0.0);
    removed_.assign(m, 0);
    is_sink_.assign(m, 0);
    for (size_t i = 0; i < m; ++i) {
      const NodeId id = view.order[i];
      double c = view.graph->tracklet(id).inner_cost;
      if (query.cost_hook && id != query.source) c += query.cost_hook(id);
      nodecost_[i] = c;
    }
    for (NodeId s : query.sinks)
      if (stamp_val(s) == cur_stamp_) is_sink_[static_cast<size_t>(lookup(s))] = 1;
  }

  std::optional<Path> run(const WindowView& view, NodeId source) {
    const size_t m = view.size();
    dist_.assign(m, kInf);
    pred_.assign(m, -1);
    if (stamp_val(source) != cur_stamp_) return std::nullopt;
    const int32_t ls = lookup(source);
    if (removed_[static_cast<size_t>(ls)]) return std::nullopt;
    dist_[static_cast<size_t>(ls)] = nodecost_[static_cast<size_t>(ls)];

    for (size_t i = 0; i < m; ++i) {
      const NodeId u = view.order[i];
      if (removed_[i] || dist_[i] >= kInf) continue;
      for_each_neighbor(view, u, [&](NodeId v, double w) {
        const size_t lv = static_cast<size_t>(lookup(v));
        const double cand = dist_[i] + w + nodecost_[lv];
        const bool better = cand < dist_[lv] - kCostEps;
        const bool tie = !better && cand < dist_[lv] + kCostEps && pred_[lv] >= 0 &&
                         u < view.order[static_cast<size_t>(pred_[lv])];
        if (better || tie) {
          dist_[lv] = better ? cand : dist_[lv];
          pred_[lv] = static_cast<int32_t>(i);
        }
      });
    }

    int32_t best_sink = -1;
    for (size_t i = 0; i < m; ++i) {
      if (!is_sink_[i] || removed_[i] || dist_[i] >= kInf) continue;
      if (best_sink < 0 || dist_[i] < dist_[static_cast<size_t>(best_sink)] - kCostEps) {
        best_sink = static_cast<int32_t>(i);
      } else if (dist_[i] < dist_[static_cast<size_t>(best_sink)] + kCostEps &&
                 view.order[i] < view.order[static_cast<size_t>(best_sink)]) {
        best_sink = static_cast<int32_t>(i);
      }
    }
    if (best_sink < 0) return std::nullopt;

    Path p;
    p.cost = dist_[static_cast<size_t>(best_sink)];
    for (int32_t cur = best_sink; cur >= 0; cur = pred_[static_cast<size_t>(cur)])
      p.nodes.push_back(view.order[static_cast<size_t>(cur)]);
    std::reverse(p.nodes.begin(), p.nodes.end());
    return p;
  }

  std::vector<uint32_t> stamp_;
  std::vector<int32_t> local_;
  uint32_t cur_stamp_ = 0;
  std::vector<NodeId> cached_order_;
  std::vector<double> nodecost_, dist_, comp_;
  std::vector<int32_t> pred_, succ_;
  std::vector<uint8_t> removed_, is_sink_;
};

// Maximal source-anchored prefix of `best` contained in every alternative.
// An empty alternative set keeps the whole path; sharing only the source
// collapses it to [source], i.e. no safe aggregation.
inline std::vector<NodeId> shared_prefix(const std::vector<NodeId>& best,
                                         const std::vector<Path>& alternatives) {
  size_t keep = best.size();
  for (const Path& alt : alternatives) {
    size_t i = 0;
    while (i < keep && i < alt.nodes.size() && alt.nodes[i] == best[i]) ++i;
    keep = std::min(keep, i);
  }
  return {best.begin(), best.begin() + static_cast<long>(keep)};
}

}  // namespace iht
