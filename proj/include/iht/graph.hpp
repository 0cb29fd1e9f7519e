#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "iht/tracklet.hpp"
#include "iht/types.hpp"

namespace iht {

using NodeId = int32_t;

struct GraphParams {
  int tau_max = 120;     // max temporal gap an edge may span (frames)
  double gamma = 3.0;    // missed-detection penalty coefficient
  bool use_velocity = true;  // predict from end velocity; off = plain displacement

  bool valid() const { return tau_max >= 1 && gamma > 0.0; }
};

// Spatio-temporal linking cost between tracklet extremities. Absent value
// means "no edge": node v must start after u ends, within tau_max frames.
inline std::optional<double> edge_weight(const Tracklet& u, const Tracklet& v,
                                         const GraphParams& p) {
  const int dt = v.t_start - u.t_end;
  if (dt <= 0 || dt > p.tau_max) return std::nullopt;
  Point predicted = u.end_position();
  if (p.use_velocity) predicted = predicted + u.end_velocity * static_cast<double>(dt);
  const double g_sp = distance(v.start_position(), predicted);
  return (1.0 + p.gamma * (dt - 1)) * g_sp;
}

// DAG over tracklets. Edges are time-forwarded, so acyclicity holds by
// construction; merging (simplify) and per-frame growth (increment) are the
// only mutations. Dead node slots keep their ids; adjacency lists of live
// nodes may hold stale references that readers skip via alive().
class TrackletGraph {
 public:
  struct HalfEdge {
    NodeId peer;
    double weight;
  };

  GraphParams params;

  explicit TrackletGraph(GraphParams p = {}) : params(p) {}

  static TrackletGraph build(const std::vector<Detection>& detections, GraphParams p) {
    TrackletGraph g(p);
    // Bucket by frame so edge creation only scans frame pairs within tau_max.
    std::map<int, std::vector<NodeId>> by_frame;
    for (const Detection& d : detections) {
      const NodeId id = g.add_node(Tracklet::from_detection(d));
      by_frame[d.t].push_back(id);
    }
    for (auto it = by_frame.begin(); it != by_frame.end(); ++it) {
      auto jt = it;
      for (++jt; jt != by_frame.end() && jt->first - it->first <= p.tau_max; ++jt) {
        for (NodeId u : it->second)
          for (NodeId v : jt->second) g.try_add_edge(u, v);
      }
    }
    return g;
  }

  bool alive(NodeId id) const {
    return id >= 0 && id < capacity() && nodes_[static_cast<size_t>(id)].alive;
  }
  NodeId capacity() const { return static_cast<NodeId>(nodes_.size()); }
  size_t node_count() const { return alive_count_; }
  size_t edge_count() const { return edge_count_; }

  const Tracklet& tracklet(NodeId id) const { return checked(id).tracklet; }
  const std::vector<HalfEdge>& out_edges(NodeId id) const { return checked(id).out; }
  const std::vector<HalfEdge>& in_edges(NodeId id) const { return checked(id).in; }

  std::vector<NodeId> alive_nodes() const {
    std::vector<NodeId> ids;
    ids.reserve(alive_count_);
    for (NodeId id = 0; id < capacity(); ++id)
      if (nodes_[static_cast<size_t>(id)].alive) ids.push_back(id);
    return ids;
  }

  int last_frame() const { return last_frame_; }

  // Adds one frame of detections, all at the same frame index, which must lie
  // strictly after every existing tracklet end. Every node ending within
  // tau_max of the new frame is linked to every new detection.
  std::vector<NodeId> increment(const std::vector<Detection>& frame_detections) {
    if (frame_detections.empty()) return {};
    const int t = frame_detections.front().t;
    for (const Detection& d : frame_detections)
      if (d.t != t) throw InputError("increment: detections span multiple frames");
    if (alive_count_ > 0 && t <= last_frame_)
      throw InputError("increment: stale frame index " + std::to_string(t));

    std::vector<NodeId> sources;
    for (NodeId id = 0; id < capacity(); ++id) {
      if (!nodes_[static_cast<size_t>(id)].alive) continue;
      if (t - nodes_[static_cast<size_t>(id)].tracklet.t_end <= params.tau_max)
        sources.push_back(id);
    }
    std::vector<NodeId> added;
    for (const Detection& d : frame_detections) {
      const NodeId v = add_node(Tracklet::from_detection(d));
      added.push_back(v);
      for (NodeId u : sources) try_add_edge(u, v);
    }
    return added;
  }

  // Replaces a validated path by one merged node. Appearance and motion are
  // recomputed from the combined detection chain; the merged inner cost is
  // the sum of traversed edge weights and constituent inner costs. Only the
  // extremity connections to the rest of the graph survive.
  NodeId simplify(const std::vector<NodeId>& path) {
    if (path.size() < 2) throw InvariantError("simplify: path needs at least two nodes");
    for (NodeId id : path)
      if (!alive(id)) throw InvariantError("simplify: node not in graph");

    Tracklet merged;
    merged.inner_cost = 0.0;
    for (size_t i = 0; i < path.size(); ++i) {
      const Tracklet& part = tracklet(path[i]);
      merged.inner_cost += part.inner_cost;
      if (i > 0) {
        const HalfEdge* e = find_out(path[i - 1], path[i]);
        if (e == nullptr) throw InvariantError("simplify: path nodes not chained");
        merged.inner_cost += e->weight;
        if (part.t_start <= tracklet(path[i - 1]).t_end)
          throw InvariantError("simplify: path not time-ordered");
      }
      merged.detections.insert(merged.detections.end(), part.detections.begin(),
                               part.detections.end());
    }
    merged.refresh();

    // Extremity connections: predecessors of the head keep their weights
    // (they depend on the predecessor's motion, which is unchanged);
    // successors of the tail are re-weighted with the merged end velocity.
    std::vector<HalfEdge> new_in;
    for (const HalfEdge& e : in_edges(path.front()))
      if (alive(e.peer) && !contains(path, e.peer)) new_in.push_back(e);
    std::vector<NodeId> out_peers;
    for (const HalfEdge& e : out_edges(path.back()))
      if (alive(e.peer) && !contains(path, e.peer)) out_peers.push_back(e.peer);

    for (NodeId id : path) remove_node(id);
    const NodeId m = add_node(std::move(merged));
    for (const HalfEdge& e : new_in) add_edge(e.peer, m, e.weight);
    for (NodeId peer : out_peers) try_add_edge(m, peer);
    return m;
  }

  // Kahn's algorithm over live nodes; empty result would indicate a cycle,
  // which construction rules make impossible but tests verify anyway.
  std::optional<std::vector<NodeId>> topological_order() const {
    std::vector<int> indeg(static_cast<size_t>(capacity()), 0);
    std::vector<NodeId> order;
    order.reserve(alive_count_);
    std::vector<NodeId> stack;
    for (NodeId id = 0; id < capacity(); ++id) {
      if (!nodes_[static_cast<size_t>(id)].alive) continue;
      int d = 0;
      for (const HalfEdge& e : in_edges(id))
        if (alive(e.peer)) ++d;
      indeg[static_cast<size_t>(id)] = d;
      if (d == 0) stack.push_back(id);
    }
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      order.push_back(u);
      for (const HalfEdge& e : out_edges(u)) {
        if (!alive(e.peer)) continue;
        if (--indeg[static_cast<size_t>(e.peer)] == 0) stack.push_back(e.peer);
      }
    }
    if (order.size() != alive_count_) return std::nullopt;
    return order;
  }

  // One trajectory per live node, ordered by (t_start, id) for stable output.
  std::vector<Trajectory> trajectories() const {
    std::vector<NodeId> ids = alive_nodes();
    std::sort(ids.begin(), ids.end(), [this](NodeId a, NodeId b) {
      const Tracklet& ta = tracklet(a);
      const Tracklet& tb = tracklet(b);
      if (ta.t_start != tb.t_start) return ta.t_start < tb.t_start;
      return a < b;
    });
    std::vector<Trajectory> tracks;
    tracks.reserve(ids.size());
    for (size_t i = 0; i < ids.size(); ++i)
      tracks.push_back({static_cast<int>(i), tracklet(ids[i]).detections});
    return tracks;
  }

 private:
  struct Node {
    Tracklet tracklet;
    std::vector<HalfEdge> out;
    std::vector<HalfEdge> in;
    bool alive = true;
  };

  const Node& checked(NodeId id) const {
    if (!alive(id)) throw InvariantError("dead or unknown node " + std::to_string(id));
    return nodes_[static_cast<size_t>(id)];
  }

  static bool contains(const std::vector<NodeId>& ids, NodeId id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  }

  const HalfEdge* find_out(NodeId u, NodeId v) const {
    for (const HalfEdge& e : checked(u).out)
      if (e.peer == v && alive(v)) return &e;
    return nullptr;
  }

  NodeId add_node(Tracklet&& t) {
    last_frame_ = std::max(last_frame_, t.t_end);
    nodes_.push_back(Node{std::move(t), {}, {}, true});
    ++alive_count_;
    return static_cast<NodeId>(nodes_.size() - 1);
  }
  NodeId add_node(const Tracklet& t) { return add_node(Tracklet(t)); }

  void add_edge(NodeId u, NodeId v, double w) {
    nodes_[static_cast<size_t>(u)].out.push_back({v, w});
    nodes_[static_cast<size_t>(v)].in.push_back({u, w});
    ++edge_count_;
  }

  void try_add_edge(NodeId u, NodeId v) {
    if (auto w = edge_weight(tracklet(u), tracklet(v), params)) add_edge(u, v, *w);
  }

  void remove_node(NodeId id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    edge_count_ -= live_degree(n.out) + live_degree(n.in);
    n.alive = false;
    --alive_count_;
    n.out.clear();
    n.out.shrink_to_fit();
    n.in.clear();
    n.in.shrink_to_fit();
  }

  size_t live_degree(const std::vector<HalfEdge>& edges) const {
    size_t d = 0;
    for (const HalfEdge& e : edges)
      if (alive(e.peer)) ++d;
    return d;
  }

  std::vector<Node> nodes_;
  size_t alive_count_ = 0;
  size_t edge_count_ = 0;
  int last_frame_ = -1;
};

}  // namespace iht
