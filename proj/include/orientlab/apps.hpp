#pragma once

#include "orientlab/core.hpp"
#include "orientlab/flipgame.hpp"
#include "orientlab/orient.hpp"

namespace orientlab::apps {

enum class MatchEngine { Orientation, FlipGame };

struct MatchConfig {
  MatchEngine engine = MatchEngine::Orientation;
  std::uint32_t delta = 4;      // BF threshold (Orientation engine)
  std::uint32_t threshold = 4;  // scan-reset threshold (FlipGame engine)
  InsertRule rule = InsertRule::ArbitraryFixed;
};

/// Maximal matching maintained on top of an orientation: each vertex tracks
/// its currently-free in-neighbors; on losing its partner a vertex first
/// takes a free in-neighbor, else scans its out-neighbors. The FlipGame
/// engine additionally resets a vertex whenever it scans its out-neighbors
/// (if outdegree exceeds the threshold).
class MatchingMaintainer {
 public:
  explicit MatchingMaintainer(MatchConfig cfg);

  MatchConfig config() const { return cfg_; }

  void apply(const UpdateOp& op);
  void apply_all(const UpdateSequence& seq);

  std::vector<std::pair<VertexId, VertexId>> matching() const;
  std::optional<VertexId> partner(VertexId v) const;
  const std::set<VertexId>& free_in(VertexId v) const;

  const OrientedGraph& graph() const { return m_.graph(); }
  const Metrics& metrics() const { return m_.metrics(); }
  /// Scan lengths + flips, the amortized-work measure.
  std::uint64_t work() const { return work_; }

  /// Throws InvariantError when maintained free-in sets differ from a
  /// from-scratch recomputation.
  void check_free_in_coherence() const;

 private:
  bool is_free(VertexId v) const;
  void fix_edge_entry(VertexId u, VertexId v);
  void match(VertexId x, VertexId y);
  void notify(VertexId x);  // status-change broadcast to out-neighbors
  void scan_reset(VertexId x);
  void rematch(VertexId x);

  MatchConfig cfg_;
  orient::Maintainer m_;
  std::map<VertexId, VertexId> partner_;
  std::map<VertexId, std::set<VertexId>> free_in_;
  std::uint64_t work_ = 0;
};

/// Adjacency structure over the threshold flipping game: per-vertex sorted
/// out-neighbor index kept whenever outdegree < 2*delta_prime; queries reset
/// both endpoints, then search the two indexes.
class AdjStruct {
 public:
  explicit AdjStruct(std::uint32_t delta_prime, InsertRule rule = InsertRule::ArbitraryFixed);

  void apply(const UpdateOp& op);
  bool adjacency_query(VertexId u, VertexId v);

  const OrientedGraph& graph() const { return g_; }
  const Metrics& metrics() const { return m_; }
  const flipgame::CostLedger& ledger() const { return led_; }

  /// Index-vs-out-set coherence under the 2*delta_prime build rule.
  void check_index_coherence() const;

 private:
  void refresh(VertexId v);
  void reset_vertex(VertexId v);

  std::uint32_t delta_prime_;
  InsertRule rule_;
  OrientedGraph g_;
  Metrics m_;
  Recorder rec_;
  flipgame::CostLedger led_;
  std::map<VertexId, std::vector<VertexId>> index_;
  std::size_t op_index_ = 0;
};

using ForestAssignment =
    std::vector<std::pair<std::pair<VertexId, VertexId>, std::size_t>>;

/// Splits a max-outdegree-delta orientation into at most 2*delta forests:
/// out-edge slot s forms a functional graph; its cycles each donate one edge
/// (the one leaving the smallest cycle vertex) to class delta+s.
ForestAssignment forest_decompose(const OrientedGraph& g, std::uint32_t delta);

struct ForestLabel {
  VertexId id = 0;
  std::map<std::size_t, VertexId> parent;  // forest class -> parent id
};

std::map<VertexId, ForestLabel> make_labels(const OrientedGraph& g,
                                            const ForestAssignment& assignment);
bool label_adjacent(const ForestLabel& l1, const ForestLabel& l2);

}  // namespace orientlab::apps
