#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "iht/graph.hpp"
#include "iht/mot_eval.hpp"
#include "iht/types.hpp"

// Delimited-text formats, space separated, one record per line, '#' starts a
// comment. Every file opens with a header line naming the format and its
// shape:
//
//   detections <dim> <nfeat>        frame x [y] f_1..f_N c_1..c_N
//   groundtruth <dim>               frame target x [y]
//   trajectories <dim>              track frame x [y]
//   mot-report                      key value
//   tracklet-graph <dim> <nfeat>    node/edge records
//
// Floats are printed with %.17g so rereading them is exact.

namespace iht {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline bool next_record(std::istream& in, std::istringstream& line) {
  std::string raw;
  while (std::getline(in, raw)) {
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    size_t start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    line.clear();
    line.str(raw);
    return true;
  }
  return false;
}

inline std::istringstream expect_header(std::istream& in, const std::string& tag) {
  std::istringstream line;
  if (!next_record(in, line)) throw InputError("empty input, expected '" + tag + "' header");
  std::string got;
  line >> got;
  if (got != tag) throw InputError("expected '" + tag + "' header, got '" + got + "'");
  return line;
}

template <typename T>
T parse(std::istringstream& line, const char* what) {
  T v{};
  if (!(line >> v)) throw InputError(std::string("malformed record: missing ") + what);
  return v;
}

}  // namespace detail

inline void write_detections(std::ostream& out, const std::vector<Detection>& dets, int dim) {
  size_t nfeat = dets.empty() ? 0 : dets.front().features.size();
  out << "detections " << dim << ' ' << nfeat << '\n';
  out << "# frame x" << (dim == 2 ? " y" : "");
  for (size_t i = 1; i <= nfeat; ++i) out << " f_" << i;
  for (size_t i = 1; i <= nfeat; ++i) out << " c_" << i;
  out << '\n';
  for (const Detection& d : dets) {
    out << d.t << ' ' << fmt_double(d.y.x);
    if (dim == 2) out << ' ' << fmt_double(d.y.y);
    for (double f : d.features) out << ' ' << fmt_double(f);
    for (double c : d.confidences) out << ' ' << fmt_double(c);
    out << '\n';
  }
}

struct DetectionFile {
  std::vector<Detection> detections;
  int dim = 1;
  int nfeat = 0;
};

inline DetectionFile read_detections(std::istream& in) {
  std::istringstream header = detail::expect_header(in, "detections");
  DetectionFile file;
  file.dim = detail::parse<int>(header, "dim");
  file.nfeat = detail::parse<int>(header, "feature count");
  if (file.dim != 1 && file.dim != 2) throw InputError("detections: dim must be 1 or 2");
  if (file.nfeat < 0) throw InputError("detections: negative feature count");
  std::istringstream line;
  while (detail::next_record(in, line)) {
    Detection d;
    d.t = detail::parse<int>(line, "frame");
    d.y.x = detail::parse<double>(line, "x");
    if (file.dim == 2) d.y.y = detail::parse<double>(line, "y");
    for (int i = 0; i < file.nfeat; ++i)
      d.features.push_back(detail::parse<double>(line, "feature"));
    for (int i = 0; i < file.nfeat; ++i) {
      const double c = detail::parse<double>(line, "confidence");
      if (c < 0.0 || c > 1.0) throw InputError("detections: confidence outside [0,1]");
      d.confidences.push_back(c);
    }
    file.detections.push_back(std::move(d));
  }
  return file;
}

inline void write_ground_truth(std::ostream& out, const std::vector<Trajectory>& gt, int dim) {
  out << "groundtruth " << dim << '\n';
  out << "# frame target x" << (dim == 2 ? " y" : "") << '\n';
  for (const Trajectory& track : gt)
    for (const Detection& d : track.detections) {
      out << d.t << ' ' << track.id << ' ' << fmt_double(d.y.x);
      if (dim == 2) out << ' ' << fmt_double(d.y.y);
      out << '\n';
    }
}

inline void write_trajectories(std::ostream& out, const std::vector<Trajectory>& tracks, int dim) {
  out << "trajectories " << dim << '\n';
  out << "# track frame x" << (dim == 2 ? " y" : "") << '\n';
  for (const Trajectory& track : tracks)
    for (const Detection& d : track.detections) {
      out << track.id << ' ' << d.t << ' ' << fmt_double(d.y.x);
      if (dim == 2) out << ' ' << fmt_double(d.y.y);
      out << '\n';
    }
}

namespace detail {

inline std::vector<Trajectory> tracks_from_records(
    std::map<int, std::vector<Detection>>&& by_id) {
  std::vector<Trajectory> tracks;
  for (auto& [id, dets] : by_id) {
    std::sort(dets.begin(), dets.end(),
              [](const Detection& a, const Detection& b) { return a.t < b.t; });
    tracks.push_back({id, std::move(dets)});
  }
  return tracks;
}

}  // namespace detail

inline std::vector<Trajectory> read_ground_truth(std::istream& in) {
  std::istringstream header = detail::expect_header(in, "groundtruth");
  const int dim = detail::parse<int>(header, "dim");
  std::map<int, std::vector<Detection>> by_id;
  std::istringstream line;
  while (detail::next_record(in, line)) {
    Detection d;
    d.t = detail::parse<int>(line, "frame");
    const int target = detail::parse<int>(line, "target");
    d.y.x = detail::parse<double>(line, "x");
    if (dim == 2) d.y.y = detail::parse<double>(line, "y");
    by_id[target].push_back(std::move(d));
  }
  return detail::tracks_from_records(std::move(by_id));
}

inline std::vector<Trajectory> read_trajectories(std::istream& in) {
  std::istringstream header = detail::expect_header(in, "trajectories");
  const int dim = detail::parse<int>(header, "dim");
  std::map<int, std::vector<Detection>> by_id;
  std::istringstream line;
  while (detail::next_record(in, line)) {
    const int track = detail::parse<int>(line, "track");
    Detection d;
    d.t = detail::parse<int>(line, "frame");
    d.y.x = detail::parse<double>(line, "x");
    if (dim == 2) d.y.y = detail::parse<double>(line, "y");
    by_id[track].push_back(std::move(d));
  }
  return detail::tracks_from_records(std::move(by_id));
}

inline void write_report(std::ostream& out, const MotReport& r) {
  out << "mot-report\n";
  out << "gt_count " << r.gt_count << '\n';
  out << "misses " << r.misses << '\n';
  out << "false_positives " << r.false_positives << '\n';
  out << "switches " << r.switches << '\n';
  out << "reinitializations " << r.reinitializations << '\n';
  out << "matches " << r.matches << '\n';
  out << "mota " << fmt_double(r.mota) << '\n';
  out << "motp " << fmt_double(r.motp) << '\n';
}

inline void write_events(std::ostream& out, const std::vector<MotEvent>& events) {
  out << "mot-events\n";
  for (const MotEvent& e : events) {
    switch (e.kind) {
      case MotEvent::Kind::match:
        out << e.frame << " match " << e.gt << ' ' << e.hyp_new << ' ' << fmt_double(e.dist)
            << '\n';
        break;
      case MotEvent::Kind::miss:
        out << e.frame << " miss " << e.gt << '\n';
        break;
      case MotEvent::Kind::false_positive:
        out << e.frame << " fp " << e.hyp_new << '\n';
        break;
      case MotEvent::Kind::id_switch:
        out << e.frame << " switch " << e.gt << ' ' << e.hyp_old << ' ' << e.hyp_new << '\n';
        break;
      case MotEvent::Kind::reinit:
        out << e.frame << " reinit " << e.gt << ' ' << e.hyp_old << ' ' << e.hyp_new << '\n';
        break;
    }
  }
}

// Debug/test dump of the full graph state, stable ordering.
inline void write_graph_dump(std::ostream& out, const TrackletGraph& g, int dim) {
  size_t nfeat = 0;
  for (NodeId id : g.alive_nodes()) {
    nfeat = g.tracklet(id).mean_features.size();
    break;
  }
  out << "tracklet-graph " << dim << ' ' << nfeat << '\n';
  for (NodeId id : g.alive_nodes()) {
    const Tracklet& t = g.tracklet(id);
    out << "node " << id << ' ' << t.t_start << ' ' << t.t_end << ' ' << t.length() << ' '
        << fmt_double(t.inner_cost);
    for (double f : t.mean_features) out << ' ' << fmt_double(f);
    for (double c : t.conf_mass) out << ' ' << fmt_double(c);
    out << '\n';
  }
  for (NodeId id : g.alive_nodes()) {
    std::vector<TrackletGraph::HalfEdge> edges;
    for (const auto& e : g.out_edges(id))
      if (g.alive(e.peer)) edges.push_back(e);
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.peer < b.peer; });
    for (const auto& e : edges)
      out << "edge " << id << ' ' << e.peer << ' ' << fmt_double(e.weight) << '\n';
  }
}

inline std::string graph_dump(const TrackletGraph& g, int dim) {
  std::ostringstream out;
  write_graph_dump(out, g, dim);
  return out.str();
}

// File helpers.
inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path);
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open for reading: " + path);
  return in;
}

}  // namespace iht
