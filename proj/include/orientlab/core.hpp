#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace orientlab {

using VertexId = std::uint32_t;

/// Rejected operation (bad input, broken precondition of an update op).
struct OpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant; a run hitting this must abort.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class OpKind {
  InsertVertex,
  DeleteVertex,
  InsertEdge,
  DeleteEdge,
  InsertEdgeDirected,  // sequence extension: edge with a fixed initial orientation a -> b
  AdjacencyQuery,
  SetValue,
};

struct UpdateOp {
  OpKind kind;
  VertexId a = 0;
  VertexId b = 0;
  std::int64_t value = 0;

  bool is_edge_update() const {
    return kind == OpKind::InsertEdge || kind == OpKind::DeleteEdge ||
           kind == OpKind::InsertEdgeDirected;
  }
};

/// Replayable stream of updates. Text format, one op per line:
///   iv <id> | dv <id> | ie <u> <v> | ied <u> <v> | de <u> <v> | q <u> <v> | val <v> <x>
/// '#' starts a comment.
struct UpdateSequence {
  std::vector<UpdateOp> ops;

  std::string to_text() const;
  static UpdateSequence from_text(const std::string& text);
  static UpdateSequence load(const std::string& path);
  void save(const std::string& path) const;
};

/// Per-run counters. All monotone while a run is in progress.
struct Metrics {
  std::uint64_t t = 0;        // edge insertions + deletions applied
  std::uint64_t f = 0;        // total edge flips
  std::uint64_t resets = 0;   // resets / anti-resets performed
  std::uint32_t peak_outdeg = 0;         // max outdegree at any instant
  std::uint32_t peak_outdeg_steady = 0;  // max outdegree between updates
  std::uint64_t rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t peak_mem_entries = 0;
  std::map<std::uint32_t, std::uint64_t> flip_distance_hist;

  std::string to_json() const;
  bool operator==(const Metrics&) const = default;
};

enum class InsertRule { ArbitraryFixed, HigherOutdegree, Directive };

/// Dynamic oriented graph. Every undirected edge {u,v} is stored in exactly
/// one of out[u], out[v]; in-neighbor sets are mirrored so oracles and
/// metrics can walk the undirected graph cheaply.
class OrientedGraph {
 public:
  bool alive(VertexId v) const { return v < verts_.size() && verts_[v].alive; }
  std::size_t n_live() const { return live_; }
  std::size_t n_edges() const { return edges_; }
  std::size_t id_bound() const { return verts_.size(); }

  std::uint32_t outdeg(VertexId v) const { return check(v), (std::uint32_t)verts_[v].out.size(); }
  std::uint32_t indeg(VertexId v) const { return check(v), (std::uint32_t)verts_[v].in.size(); }
  std::uint32_t degree(VertexId v) const { return outdeg(v) + indeg(v); }

  const std::set<VertexId>& out(VertexId v) const { return check(v), verts_[v].out; }
  const std::set<VertexId>& in(VertexId v) const { return check(v), verts_[v].in; }

  bool has_edge(VertexId u, VertexId v) const;
  /// True iff the edge exists and is oriented u -> v.
  bool oriented(VertexId u, VertexId v) const;

  void insert_vertex(VertexId v);
  /// Vertex must be isolated; callers decompose deletions into edge deletions first.
  void delete_vertex(VertexId v);
  void insert_directed(VertexId u, VertexId v);
  void delete_edge(VertexId u, VertexId v);

  /// Reverse an existing edge oriented u -> v. Opposite or absent edges are
  /// an internal-invariant failure, not a rejectable input.
  void flip(VertexId u, VertexId v);

  std::vector<VertexId> live_vertices() const;
  /// Undirected adjacency of v.
  std::vector<VertexId> neighbors(VertexId v) const;

  /// Full-scan consistency check (orientation totality + counters).
  void check_invariants() const;

 private:
  struct V {
    bool alive = false;
    std::set<VertexId> out;
    std::set<VertexId> in;
  };
  void check(VertexId v) const {
    if (!alive(v)) throw OpError("dead or unknown vertex " + std::to_string(v));
  }
  std::vector<V> verts_;
  std::size_t live_ = 0;
  std::size_t edges_ = 0;
};

/// Attaches Metrics to a graph: peak tracking at every instant, flip
/// accounting, and optional flip-distance histograms measured from the
/// endpoints of the in-flight update.
class Recorder {
 public:
  explicit Recorder(OrientedGraph& g, Metrics& m) : g_(g), m_(m) {}

  void enable_flip_distance(bool on) { track_dist_ = on; }
  void enable_vertex_peaks(bool on) { track_vertex_peaks_ = on; }

  /// Call after applying the raw part of an update op, before any cascade.
  void begin_op(const UpdateOp& op);
  /// Call when the update (including cascades) is fully processed.
  void end_op();

  /// Flip with full accounting; always bumps f, then fires on_flip.
  void flip(VertexId u, VertexId v);
  void note_reset(VertexId v, std::uint32_t outdeg_at_reset) {
    m_.resets++;
    if (on_reset) on_reset(v, outdeg_at_reset);
  }

  /// Observers for cost models and overlay maintenance. on_flip sees the
  /// pre-flip orientation (u was the tail).
  std::function<void(VertexId u, VertexId v)> on_flip;
  std::function<void(VertexId v, std::uint32_t outdeg)> on_reset;
  /// Outdegree of v changed by some non-flip mutation (raw insert/delete).
  void note_outdeg(VertexId v);

  std::uint32_t current_max_outdeg() const;
  std::uint32_t vertex_peak(VertexId v) const;

 private:
  void bump(VertexId v, std::uint32_t now);
  void transition(std::uint32_t from, std::uint32_t to);

  OrientedGraph& g_;
  Metrics& m_;
  bool track_dist_ = false;
  bool track_vertex_peaks_ = false;
  bool in_op_ = false;
  std::vector<std::uint32_t> dist_;  // BFS distance from current op endpoints
  std::map<VertexId, std::uint32_t> vertex_peak_;
  // outdegree census for O(1) steady-peak queries
  std::vector<std::uint64_t> census_;
  std::uint32_t census_max_ = 0;
  bool census_ready_ = false;
  void ensure_census();
  std::map<VertexId, std::uint32_t> last_deg_;  // shadow degrees for census transitions
};

/// Apply one op directly (no cascade). Returns the number of edge updates
/// performed (a vertex deletion decomposes into one deletion per incident
/// edge); callers bill the result to Metrics.t. Queries are a no-op at this
/// layer. `op_index` only flavors diagnostics.
std::size_t apply_raw(OrientedGraph& g, const UpdateOp& op, InsertRule rule, Recorder& rec,
                      std::size_t op_index = 0);

}  // namespace orientlab
