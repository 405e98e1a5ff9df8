#include "orientlab/core.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace orientlab {

// ---------------------------------------------------------------- sequences

std::string UpdateSequence::to_text() const {
  std::ostringstream os;
  for (const auto& op : ops) {
    switch (op.kind) {
      case OpKind::InsertVertex: os << "iv " << op.a << "\n"; break;
      case OpKind::DeleteVertex: os << "dv " << op.a << "\n"; break;
      case OpKind::InsertEdge: os << "ie " << op.a << " " << op.b << "\n"; break;
      case OpKind::InsertEdgeDirected: os << "ied " << op.a << " " << op.b << "\n"; break;
      case OpKind::DeleteEdge: os << "de " << op.a << " " << op.b << "\n"; break;
      case OpKind::AdjacencyQuery: os << "q " << op.a << " " << op.b << "\n"; break;
      case OpKind::SetValue: os << "val " << op.a << " " << op.value << "\n"; break;
    }
  }
  return os.str();
}

UpdateSequence UpdateSequence::from_text(const std::string& text) {
  UpdateSequence seq;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    UpdateOp op{};
    auto need = [&](int k) {
      std::int64_t vals[2];
      for (int i = 0; i < k; ++i)
        if (!(ls >> vals[i]))
          throw OpError("sequence line " + std::to_string(lineno) + ": expected " +
                        std::to_string(k) + " operand(s) after '" + tag + "'");
      op.a = static_cast<VertexId>(vals[0]);
      if (k > 1) op.b = static_cast<VertexId>(vals[1]);
      if (tag == "val") op.value = vals[1];
    };
    if (tag == "iv") { op.kind = OpKind::InsertVertex; need(1); }
    else if (tag == "dv") { op.kind = OpKind::DeleteVertex; need(1); }
    else if (tag == "ie") { op.kind = OpKind::InsertEdge; need(2); }
    else if (tag == "ied") { op.kind = OpKind::InsertEdgeDirected; need(2); }
    else if (tag == "de") { op.kind = OpKind::DeleteEdge; need(2); }
    else if (tag == "q") { op.kind = OpKind::AdjacencyQuery; need(2); }
    else if (tag == "val") { op.kind = OpKind::SetValue; need(2); }
    else throw OpError("sequence line " + std::to_string(lineno) + ": unknown op '" + tag + "'");
    seq.ops.push_back(op);
  }
  return seq;
}

UpdateSequence UpdateSequence::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OpError("cannot open sequence file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_text(os.str());
}

void UpdateSequence::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw OpError("cannot write sequence file: " + path);
  out << to_text();
}

// ------------------------------------------------------------------ metrics

std::string Metrics::to_json() const {
  nlohmann::ordered_json j;
  j["t"] = t;
  j["f"] = f;
  j["resets"] = resets;
  j["peak_outdeg"] = peak_outdeg;
  j["peak_outdeg_steady"] = peak_outdeg_steady;
  j["rounds"] = rounds;
  j["messages"] = messages;
  j["peak_mem_entries"] = peak_mem_entries;
  if (!flip_distance_hist.empty()) {
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    for (auto& [d, c] : flip_distance_hist) h[std::to_string(d)] = c;
    j["flip_distance_hist"] = h;
  }
  return j.dump();
}

// -------------------------------------------------------------------- graph

bool OrientedGraph::has_edge(VertexId u, VertexId v) const {
  check(u);
  check(v);
  return verts_[u].out.count(v) || verts_[v].out.count(u);
}

bool OrientedGraph::oriented(VertexId u, VertexId v) const {
  check(u);
  check(v);
  return verts_[u].out.count(v) > 0;
}

void OrientedGraph::insert_vertex(VertexId v) {
  if (v >= verts_.size()) verts_.resize(v + 1);
  if (verts_[v].alive) throw OpError("vertex " + std::to_string(v) + " already live");
  verts_[v].alive = true;
  ++live_;
}

void OrientedGraph::delete_vertex(VertexId v) {
  check(v);
  if (!verts_[v].out.empty() || !verts_[v].in.empty())
    throw InvariantError("delete_vertex on non-isolated vertex " + std::to_string(v));
  verts_[v].alive = false;
  --live_;
}

void OrientedGraph::insert_directed(VertexId u, VertexId v) {
  check(u);
  check(v);
  if (u == v) throw OpError("self-loop at vertex " + std::to_string(u));
  if (has_edge(u, v))
    throw OpError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  verts_[u].out.insert(v);
  verts_[v].in.insert(u);
  ++edges_;
}

void OrientedGraph::delete_edge(VertexId u, VertexId v) {
  check(u);
  check(v);
  if (verts_[u].out.erase(v)) {
    verts_[v].in.erase(u);
  } else if (verts_[v].out.erase(u)) {
    verts_[u].in.erase(v);
  } else {
    throw OpError("missing edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  --edges_;
}

void OrientedGraph::flip(VertexId u, VertexId v) {
  if (!alive(u) || !alive(v) || !verts_[u].out.count(v))
    throw InvariantError("flip of edge not oriented " + std::to_string(u) + "->" +
                         std::to_string(v));
  verts_[u].out.erase(v);
  verts_[v].in.erase(u);
  verts_[v].out.insert(u);
  verts_[u].in.insert(v);
}

std::vector<VertexId> OrientedGraph::live_vertices() const {
  std::vector<VertexId> out;
  out.reserve(live_);
  for (VertexId v = 0; v < verts_.size(); ++v)
    if (verts_[v].alive) out.push_back(v);
  return out;
}

std::vector<VertexId> OrientedGraph::neighbors(VertexId v) const {
  check(v);
  std::vector<VertexId> r(verts_[v].out.begin(), verts_[v].out.end());
  r.insert(r.end(), verts_[v].in.begin(), verts_[v].in.end());
  std::sort(r.begin(), r.end());
  return r;
}

void OrientedGraph::check_invariants() const {
  std::size_t edges = 0;
  for (VertexId v = 0; v < verts_.size(); ++v) {
    const auto& s = verts_[v];
    if (!s.alive) {
      if (!s.out.empty() || !s.in.empty())
        throw InvariantError("dead vertex " + std::to_string(v) + " has incident edges");
      continue;
    }
    for (VertexId w : s.out) {
      if (!alive(w)) throw InvariantError("edge to dead vertex");
      if (verts_[w].out.count(v)) throw InvariantError("edge oriented both ways");
      if (!verts_[w].in.count(v)) throw InvariantError("in-set out of sync");
      ++edges;
    }
    for (VertexId w : s.in)
      if (!verts_[w].out.count(v)) throw InvariantError("stale in-set entry");
  }
  if (edges != edges_) throw InvariantError("edge counter out of sync");
}

// ----------------------------------------------------------------- recorder

void Recorder::ensure_census() {
  if (census_ready_) return;
  census_ready_ = true;
  census_.assign(16, 0);
  last_deg_.clear();
  census_max_ = 0;
  for (VertexId v : g_.live_vertices()) {
    std::uint32_t d = g_.outdeg(v);
    if (d > 0) {
      if (d >= census_.size()) census_.resize(d + 1, 0);
      census_[d]++;
      census_max_ = std::max(census_max_, d);
      last_deg_[v] = d;
    }
  }
}

void Recorder::transition(std::uint32_t from, std::uint32_t to) {
  if (from == to) return;
  if (from > 0) census_[from]--;
  if (to > 0) {
    if (to >= census_.size()) census_.resize(to + 1, 0);
    census_[to]++;
    census_max_ = std::max(census_max_, to);
  }
  while (census_max_ > 0 && census_[census_max_] == 0) --census_max_;
}

std::uint32_t Recorder::current_max_outdeg() const {
  return census_max_;
}

std::uint32_t Recorder::vertex_peak(VertexId v) const {
  auto it = vertex_peak_.find(v);
  return it == vertex_peak_.end() ? 0 : it->second;
}

void Recorder::bump(VertexId v, std::uint32_t now) {
  ensure_census();
  std::uint32_t prev = 0;
  auto it = last_deg_.find(v);
  if (it != last_deg_.end()) prev = it->second;
  if (now == 0) last_deg_.erase(v); else last_deg_[v] = now;
  transition(prev, now);
  m_.peak_outdeg = std::max(m_.peak_outdeg, now);
  if (track_vertex_peaks_) {
    auto& p = vertex_peak_[v];
    p = std::max(p, now);
  }
}

void Recorder::note_outdeg(VertexId v) {
  bump(v, g_.alive(v) ? g_.outdeg(v) : 0);
}

void Recorder::begin_op(const UpdateOp& op) {
  in_op_ = true;
  if (!track_dist_) return;
  dist_.assign(g_.id_bound(), UINT32_MAX);
  std::deque<VertexId> q;
  auto seed = [&](VertexId v) {
    if (g_.alive(v) && dist_[v] == UINT32_MAX) {
      dist_[v] = 0;
      q.push_back(v);
    }
  };
  seed(op.a);
  if (op.kind != OpKind::InsertVertex && op.kind != OpKind::DeleteVertex &&
      op.kind != OpKind::SetValue)
    seed(op.b);
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (VertexId w : g_.neighbors(v))
      if (dist_[w] == UINT32_MAX) {
        dist_[w] = dist_[v] + 1;
        q.push_back(w);
      }
  }
}

void Recorder::end_op() {
  in_op_ = false;
  ensure_census();
  m_.peak_outdeg_steady = std::max(m_.peak_outdeg_steady, census_max_);
}

void Recorder::flip(VertexId u, VertexId v) {
  g_.flip(u, v);
  m_.f++;
  bump(u, g_.outdeg(u));
  bump(v, g_.outdeg(v));
  if (track_dist_ && in_op_) {
    std::uint32_t d = UINT32_MAX;
    if (u < dist_.size()) d = std::min(d, dist_[u]);
    if (v < dist_.size()) d = std::min(d, dist_[v]);
    if (d != UINT32_MAX) m_.flip_distance_hist[d]++;
  }
  if (on_flip) on_flip(u, v);
}

// ---------------------------------------------------------------- apply_raw

std::size_t apply_raw(OrientedGraph& g, const UpdateOp& op, InsertRule rule, Recorder& rec,
                      std::size_t op_index) {
  auto ctx = [&](const std::string& msg) {
    return OpError("op " + std::to_string(op_index) + ": " + msg);
  };
  try {
    switch (op.kind) {
      case OpKind::InsertVertex:
        g.insert_vertex(op.a);
        return 0;
      case OpKind::DeleteVertex: {
        if (!g.alive(op.a)) throw OpError("dead or unknown vertex " + std::to_string(op.a));
        // decomposes into edge deletions, each billed to t
        std::size_t billed = 0;
        for (VertexId w : g.neighbors(op.a)) {
          g.delete_edge(op.a, w);
          rec.note_outdeg(op.a);
          rec.note_outdeg(w);
          ++billed;
        }
        g.delete_vertex(op.a);
        return billed;
      }
      case OpKind::InsertEdge:
      case OpKind::InsertEdgeDirected: {
        VertexId u = op.a, v = op.b;
        if (op.kind == OpKind::InsertEdge) {
          switch (rule) {
            case InsertRule::ArbitraryFixed:
              // deterministic default: orient toward the higher VertexId
              if (u > v) std::swap(u, v);
              break;
            case InsertRule::HigherOutdegree:
              // from the vertex of lower outdegree to the vertex of higher
              // outdegree; ties toward the higher VertexId
              if (!g.alive(u) || !g.alive(v)) break;  // insert_directed reports it
              if (g.outdeg(u) > g.outdeg(v) ||
                  (g.outdeg(u) == g.outdeg(v) && u > v))
                std::swap(u, v);
              break;
            case InsertRule::Directive:
              break;  // plain 'ie' under directive mode keeps the written order
          }
        }
        g.insert_directed(u, v);
        rec.note_outdeg(u);
        return 1;
      }
      case OpKind::DeleteEdge: {
        bool was_ab = g.oriented(op.a, op.b);
        if (!was_ab && !g.oriented(op.b, op.a))
          throw OpError("missing edge (" + std::to_string(op.a) + "," + std::to_string(op.b) + ")");
        g.delete_edge(op.a, op.b);
        rec.note_outdeg(was_ab ? op.a : op.b);
        return 1;
      }
      case OpKind::AdjacencyQuery:
      case OpKind::SetValue:
        if (!g.alive(op.a)) throw OpError("dead or unknown vertex " + std::to_string(op.a));
        if (op.kind == OpKind::AdjacencyQuery && !g.alive(op.b))
          throw OpError("dead or unknown vertex " + std::to_string(op.b));
        return 0;
    }
  } catch (const OpError& e) {
    throw ctx(e.what());
  }
  return 0;
}

}  // namespace orientlab
